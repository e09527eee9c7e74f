//! Number formatting and angle parsing for CSV output and grid arguments.

use std::f64::consts::PI;

use crate::error::CliError;

/// Twelve significant digits, trailing zeros trimmed, like C's `%.12g`.
pub fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // The exponent is read after rounding, so 9.9999999999999 lands in the next decade.
    let sci = format!("{x:.11e}");
    let (mantissa, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if !(-5..12).contains(&e) {
        let m = trim(mantissa);
        let sign = if e < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", e.abs())
    } else {
        let decimals = (11 - e).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A number, or a multiple of pi: `pi`, `pi/4`, `3pi/4`, `3*pi/4`, `-pi/2`.
pub fn parse_value(token: &str) -> Result<f64, CliError> {
    let t = token.trim();
    let bad = || CliError::Usage(format!("cannot parse `{token}` as a number or multiple of pi"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?.trim().trim_end_matches('*').trim();
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(g12(2.0), "2");
        assert_eq!(g12(1.5), "1.5");
        assert_eq!(g12(std::f64::consts::SQRT_2), "1.41421356237");
        assert_eq!(g12(-0.125), "-0.125");
        assert_eq!(g12(1.23e-7), "1.23e-07");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(g12(0.999999999999999), "1");
        assert_eq!(g12(100000.0), "100000");
    }

    #[test]
    fn multiples_of_pi() {
        assert_eq!(parse_value("0.25").unwrap(), 0.25);
        assert_eq!(parse_value("pi").unwrap(), PI);
        assert_eq!(parse_value("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_value("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_value("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_value("-pi/2").unwrap(), -PI / 2.0);
        assert!(parse_value("tau").is_err());
        assert!(parse_value("pi/x").is_err());
    }
}
