//! Distances between channels by Monte-Carlo search over input states.
//!
//! The diamond-norm search maximizes `||(I (x) E1) xi - (I (x) E2) xi||_1`
//! over pure two-qubit inputs `xi`, propagating `xi` through the channels in
//! the Fano representation: the coefficients `R` of `xi` map to
//! `(I (x) M_i) R`, and the trace norm of the output difference is the sum
//! of absolute eigenvalues of a 4x4 Hermitian matrix. Without the ancilla the
//! same search runs over single-qubit pure states.
//!
//! Inputs are drawn uniformly on the angle box of the parametrization, which
//! is not the Haar measure on pure states. Every value returned by a search
//! is attained by some input, so it is a lower bound on the true norm.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::channels::{apply_affine, Channel, ExtendedAffine, PauliWeights};
use crate::error::{Error, Result};
use crate::linalg::trace_norm;
use crate::search::{random_search, ParameterBox, SearchConfig, SearchResult};
use crate::states::{
    fano_from_density, operator_from_fano, qubit_operator_from_fano, BlochVector, DensityMatrix, PureStateAngles,
    RealStateAngles,
};

/// Slack allowed when a reference value sits just below a sampled maximum.
pub const REFERENCE_TOL: f64 = 1e-9;

/// Minimum number of positive-error points needed to fit a power law.
pub const MIN_FIT_POINTS: usize = 10;

/// Minimal error probabilities of single-shot discrimination without (`p_e_prime`)
/// and with (`p_e`) an ancilla.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorProbabilities {
    pub p_e_prime: f64,
    pub p_e: f64,
}

/// Angle box of the two-qubit input parametrization.
pub fn diamond_parameter_box(real_only: bool) -> ParameterBox {
    if real_only {
        ParameterBox::new(&[("theta1", 0.0, FRAC_PI_2), ("theta2", 0.0, 2.0 * PI), ("theta3", 0.0, 2.0 * PI)])
    } else {
        ParameterBox::new(&[
            ("theta1", 0.0, FRAC_PI_2),
            ("theta2", 0.0, FRAC_PI_2),
            ("theta3", 0.0, FRAC_PI_2),
            ("phi1", 0.0, 2.0 * PI),
            ("phi2", 0.0, 2.0 * PI),
            ("phi3", 0.0, 2.0 * PI),
        ])
    }
}

/// Polar and azimuthal angle of a single-qubit pure input.
pub fn trace_parameter_box() -> ParameterBox {
    ParameterBox::new(&[("theta", 0.0, PI), ("phi", 0.0, 2.0 * PI)])
}

/// Input state for a point of [`diamond_parameter_box`].
pub fn input_state(params: &[f64], real_only: bool) -> DensityMatrix {
    let amplitudes = if real_only {
        RealStateAngles { theta: [params[0], params[1], params[2]] }.amplitudes()
    } else {
        PureStateAngles { theta: [params[0], params[1], params[2]], phi: [params[3], params[4], params[5]] }
            .amplitudes()
    };
    DensityMatrix::pure_unchecked(&amplitudes)
}

fn fano_distance(m1: &ExtendedAffine, m2: &ExtendedAffine, xi: &DensityMatrix) -> Result<f64> {
    let r = fano_from_density(xi)?;
    let (r1, r2) = (apply_affine(m1, &r), apply_affine(m2, &r));
    let mut diff = [0.0; 16];
    for (k, d) in diff.iter_mut().enumerate() {
        *d = r1.coefficients()[k] - r2.coefficients()[k];
    }
    trace_norm(&operator_from_fano(&diff))
}

/// `||(I (x) E1) xi - (I (x) E2) xi||_1` for a two-qubit input `xi`.
pub fn distance_for_input(e1: &Channel, e2: &Channel, xi: &DensityMatrix) -> Result<f64> {
    fano_distance(&e1.extended(), &e2.extended(), xi)
}

/// `||E1(rho) - E2(rho)||_1` for a single-qubit input.
pub fn single_qubit_distance(e1: &Channel, e2: &Channel, r: &BlochVector) -> Result<f64> {
    let (r1, r2) = (e1.affine().apply(r), e2.affine().apply(r));
    let diff = [r1.0[0] - r2.0[0], r1.0[1] - r2.0[1], r1.0[2] - r2.0[2], 0.0];
    trace_norm(&qubit_operator_from_fano(&diff))
}

/// Trace distance `max_rho ||E1(rho) - E2(rho)||_1` over single-qubit pure states.
pub fn trace_distance_channels(e1: &Channel, e2: &Channel, cfg: &SearchConfig) -> Result<SearchResult> {
    random_search(&trace_parameter_box(), cfg, |p| {
        single_qubit_distance(e1, e2, &BlochVector::from_spherical(1.0, p[0], p[1]))
    })
}

/// Diamond distance by random search over pure system-ancilla inputs.
///
/// `real_only` restricts the inputs to real amplitudes (three angles, with
/// signs), which suffices for channel pairs whose optimum is a real state.
pub fn diamond_distance_f(e1: &Channel, e2: &Channel, cfg: &SearchConfig, real_only: bool) -> Result<SearchResult> {
    let (m1, m2) = (e1.extended(), e2.extended());
    random_search(&diamond_parameter_box(real_only), cfg, |p| fano_distance(&m1, &m2, &input_state(p, real_only)))
}

/// Closed-form diamond distance of two Pauli channels, `sum_a |q_a - q'_a|`.
pub fn pauli_diamond(q1: &PauliWeights, q2: &PauliWeights) -> f64 {
    q1.by_label().iter().zip(q2.by_label()).map(|(a, b)| (a - b).abs()).sum()
}

/// Closed-form trace distance of two Pauli channels: the largest difference of
/// axis contractions, since both maps are diagonal on the Bloch ball.
pub fn pauli_trace(q1: &PauliWeights, q2: &PauliWeights) -> f64 {
    q1.contractions().iter().zip(q2.contractions()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// `p'_E = 1/2 - trace/4` and `p_E = 1/2 - diamond/4`.
pub fn error_probabilities(trace_dist: f64, diamond_dist: f64) -> Result<ErrorProbabilities> {
    for (name, v) in [("trace distance", trace_dist), ("diamond distance", diamond_dist)] {
        if !(0.0..=2.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} {v} outside [0, 2]")));
        }
    }
    if trace_dist > diamond_dist {
        return Err(Error::InvalidArgument(format!(
            "trace distance {trace_dist} exceeds diamond distance {diamond_dist}"
        )));
    }
    Ok(ErrorProbabilities { p_e_prime: 0.5 - trace_dist / 4.0, p_e: 0.5 - diamond_dist / 4.0 })
}

/// `delta(N_r) = reference - running_max(N_r)` along the recorded trace.
///
/// The reference must be supplied independently (an analytic value or a much
/// longer run); it may sit below the sampled maximum only by [`REFERENCE_TOL`].
pub fn convergence_error_trace(result: &SearchResult, reference: f64) -> Result<Vec<(u64, f64)>> {
    if reference < result.best_value - REFERENCE_TOL {
        return Err(Error::InvalidArgument(format!(
            "reference {reference} is below the sampled maximum {}",
            result.best_value
        )));
    }
    Ok(result.trace.iter().map(|t| (t.trials, (reference - t.running_max).max(0.0))).collect())
}

/// Least-squares slope of `ln delta` against `ln N_r` over the points with `delta > 0`.
pub fn fit_power_law(trace: &[(u64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .filter(|(n, d)| *n > 0 && *d > 0.0 && d.is_finite())
        .map(|&(n, d)| ((n as f64).ln(), d.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidArgument(format!(
            "{} points with positive error; at least {MIN_FIT_POINTS} are needed",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all points share one trial count".into()));
    }
    Ok(sxy / sxx)
}

/// Exponent of `delta ~ N_r^k` predicted for a smooth maximum of random search:
/// reaching within `sqrt(delta)` of an optimal set of dimension `optimum_dim`
/// in `n_params` dimensions takes `N_r ~ delta^{-(n_params - optimum_dim)/2}` trials.
pub fn expected_exponent(n_params: usize, optimum_dim: usize) -> Result<f64> {
    if optimum_dim >= n_params {
        return Err(Error::InvalidArgument("optimal set must have lower dimension than the search space".into()));
    }
    Ok(-2.0 / (n_params - optimum_dim) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{bit_flip, displacement_x, displacement_z, phase_flip, sacchi_pair};
    use crate::search::TracePoint;
    use crate::states::maximally_entangled;

    #[test]
    fn identical_channels_are_indistinguishable() {
        let e = displacement_x(0.4).unwrap();
        let xi = input_state(&[0.3, 1.0, 0.2, 4.0, 1.0, 2.0], false);
        assert!(distance_for_input(&e, &e, &xi).unwrap() < 1e-15);
        let probs = error_probabilities(0.0, 0.0).unwrap();
        assert_eq!((probs.p_e_prime, probs.p_e), (0.5, 0.5));
    }

    #[test]
    fn sacchi_pair_bell_input_is_perfect() {
        let (e1, e2) = sacchi_pair();
        assert!((distance_for_input(&e1, &e2, &maximally_entangled()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bell_input_displacement_formula() {
        for theta in [0.1, 0.7, 1.3, FRAC_PI_2] {
            let (sz, cz) = f64::sin_cos(theta);
            let (s2, root) = (sz * sz, (sz.powi(4) + 4.0 * (1.0 - cz).powi(2)).sqrt());
            let expect = s2 / 2.0 + (s2 + root).abs() / 4.0 + (s2 - root).abs() / 4.0;
            let d = distance_for_input(&displacement_z(theta).unwrap(), &Channel::identity(), &maximally_entangled())
                .unwrap();
            assert!((d - expect).abs() < 1e-12, "theta {theta}: {d} vs {expect}");
        }
    }

    #[test]
    fn error_probability_examples() {
        let p = error_probabilities(1.5, 2.0).unwrap();
        assert_eq!((p.p_e_prime, p.p_e), (0.125, 0.0));
        let p = error_probabilities(1.0, 1.5).unwrap();
        assert_eq!((p.p_e_prime, p.p_e), (0.25, 0.125));
        assert!(error_probabilities(1.0, 0.5).is_err());
        assert!(error_probabilities(-0.1, 0.5).is_err());
        assert!(error_probabilities(1.0, 2.5).is_err());
    }

    #[test]
    fn pauli_closed_forms() {
        let q = |a, b, c, d| PauliWeights::new(a, b, c, d).unwrap();
        assert_eq!(pauli_diamond(&q(0.5, 0.25, 0.25, 0.0), &q(0.0, 0.0, 0.0, 1.0)), 2.0);
        assert_eq!(pauli_diamond(&q(0.25, 0.25, 0.25, 0.25), &q(1.0, 0.0, 0.0, 0.0)), 1.5);
        assert_eq!(pauli_diamond(&q(0.3, 0.3, 0.2, 0.2), &q(0.3, 0.3, 0.2, 0.2)), 0.0);
        assert_eq!(pauli_trace(&q(0.5, 0.25, 0.25, 0.0), &q(0.0, 0.0, 0.0, 1.0)), 1.5);
        let (c1, c2) = (0.2, 0.5);
        let bf = *bit_flip(c1).unwrap().pauli_weights().unwrap();
        let pf = *phase_flip(c2).unwrap().pauli_weights().unwrap();
        assert!((pauli_diamond(&bf, &pf) - f64::max(1.0 - c1, 1.0 - c2)).abs() < 1e-15);
        assert!((pauli_trace(&bf, &pf) - f64::max(1.0 - c1, 1.0 - c2)).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_of_sacchi_pair() {
        let (e1, e2) = sacchi_pair();
        let r = trace_distance_channels(&e1, &e2, &SearchConfig::new(20_000, 1)).unwrap();
        assert!(r.best_value <= 1.5 + 1e-12);
        assert!(r.best_value > 1.49);
    }

    #[test]
    fn convergence_trace_and_reference_checks() {
        let result = SearchResult {
            best_value: 1.9,
            best_params: vec![],
            best_trial: 0,
            param_names: vec![],
            trace: vec![
                TracePoint { trials: 1, running_max: 1.0 },
                TracePoint { trials: 10, running_max: 1.5 },
                TracePoint { trials: 100, running_max: 1.9 },
            ],
            seed: 0,
            trials: 100,
            refinement: None,
        };
        let d = convergence_error_trace(&result, 1.9).unwrap();
        assert_eq!(d.last().unwrap().1, 0.0);
        assert!(d.windows(2).all(|w| w[0].1 >= w[1].1));
        assert!(convergence_error_trace(&result, 1.8).is_err());
    }

    #[test]
    fn exact_power_laws_are_recovered() {
        let pts: Vec<(u64, f64)> = (1..=40).map(|k| (10 * k * k, 1.0 / (10 * k * k) as f64)).collect();
        assert!((fit_power_law(&pts).unwrap() + 1.0).abs() < 1e-12);
        let pts: Vec<(u64, f64)> = (1..=40).map(|k| (7 * k, ((7 * k) as f64).powf(-2.0 / 3.0))).collect();
        assert!((fit_power_law(&pts).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        assert!(fit_power_law(&pts[..9]).is_err());
    }

    #[test]
    fn heuristic_exponents() {
        assert_eq!(expected_exponent(3, 0).unwrap(), -2.0 / 3.0);
        assert_eq!(expected_exponent(3, 1).unwrap(), -1.0);
        assert!(expected_exponent(3, 3).is_err());
    }
}
