//! Acceptance criteria, one pass/fail line each. Run with
//! `cargo test -p chandist --test acceptance`.

#[path = "../common/mod.rs"]
mod common;

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use chandist::channels::{
    apply_affine, bit_flip, depolarizing, displacement_x, displacement_z, pauli_channel, phase_flip, sacchi_pair,
    Channel, PauliWeights,
};
use chandist::discrimination::{
    convergence_error_trace, diamond_distance_f, distance_for_input, error_probabilities, fit_power_law, pauli_diamond,
    trace_distance_channels,
};
use chandist::kitaev::{
    alt_decomposition, build_sigma, decompose_sigma, max_output_fidelity, DifferenceDecomposition, InputSampling,
};
use chandist::linalg::ComplexMatrix;
use chandist::search::SearchConfig;
use chandist::states::{density_from_fano, fano_from_density, maximally_entangled};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Slack on `diamond >= trace` when both sides come from random search.
const MC_ORDER_TOL: f64 = 1e-2;

#[derive(Default)]
struct Suite {
    failed: Vec<String>,
    /// `(label, trace, diamond)` for every pair where both were computed.
    pairs: Vec<(String, f64, f64)>,
}

impl Suite {
    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("[{}] {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id.to_string());
        }
    }

    fn record(&mut self, label: impl Into<String>, trace: f64, diamond: f64) {
        self.pairs.push((label.into(), trace, diamond));
    }
}

fn trace_of(e1: &Channel, e2: &Channel, trials: u64, seed: u64) -> f64 {
    trace_distance_channels(e1, e2, &SearchConfig::new(trials, seed)).unwrap().best_value
}

fn diamond_of(e1: &Channel, e2: &Channel, trials: u64, seed: u64, real_only: bool) -> f64 {
    diamond_distance_f(e1, e2, &SearchConfig::new(trials, seed), real_only).unwrap().best_value
}

fn kitaev_of(e1: &Channel, e2: &Channel, trials: u64, seed: u64) -> f64 {
    let d = decompose_sigma(&build_sigma(e1.kraus(), e2.kraus()).unwrap()).unwrap();
    max_output_fidelity(&d, &SearchConfig::new(trials, seed), InputSampling::Mixed).unwrap().best_value
}

fn random_pauli_pairs(seed: u64, n: usize) -> Vec<(PauliWeights, PauliWeights)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (common::random_pauli_weights(&mut rng), common::random_pauli_weights(&mut rng))).collect()
}

fn criterion_1(s: &mut Suite) {
    let start = Instant::now();
    let (e1, e2) = sacchi_pair();
    let diamond = diamond_of(&e1, &e2, 100_000, 1, true);
    let trace = trace_of(&e1, &e2, 100_000, 1);
    let secs = start.elapsed().as_secs_f64();
    s.record("sacchi", trace, diamond);
    s.check(
        "1 sacchi pair",
        (diamond - 2.0).abs() <= 1e-2 && (trace - 1.5).abs() <= 1e-2 && secs < 60.0,
        format!("diamond {diamond:.6} (2 +- 1e-2), trace {trace:.6} (1.5 +- 1e-2), {secs:.2} s (< 60 s)"),
    );
}

fn criterion_2(s: &mut Suite) {
    let mut worst: f64 = 0.0;
    for (k, (q1, q2)) in random_pauli_pairs(2, 50).iter().enumerate() {
        let f = diamond_of(&pauli_channel(*q1), &pauli_channel(*q2), 200_000, k as u64, false);
        worst = worst.max((f - pauli_diamond(q1, q2)).abs());
    }
    s.check("2 pauli oracle", worst <= 2e-2, format!("max |F - sum|dq|| over 50 pairs {worst:.3e} (<= 2e-2)"));
}

fn criterion_3(s: &mut Suite) {
    let cs = [0.2, 0.5, 0.8];
    let mut worst: f64 = 0.0;
    for &c1 in &cs {
        for &c2 in &cs {
            let (e1, e2) = (bit_flip(c1).unwrap(), phase_flip(c2).unwrap());
            let expect = f64::max(1.0 - c1, 1.0 - c2);
            let diamond = diamond_of(&e1, &e2, 200_000, 3, false);
            let trace = trace_of(&e1, &e2, 100_000, 3);
            s.record(format!("bit_flip({c1}) vs phase_flip({c2})"), trace, diamond);
            worst = worst.max((diamond - expect).abs()).max((trace - expect).abs());
        }
    }
    s.check("3 bit flip vs phase flip", worst <= 1e-2, format!("max deviation over 9 pairs {worst:.3e} (<= 1e-2)"));
}

fn criterion_4(s: &mut Suite) {
    let mut worst: f64 = 0.0;
    for k in 0..=10 {
        let tz = FRAC_PI_2 * k as f64 / 10.0;
        let trace = trace_of(&displacement_x(0.0).unwrap(), &displacement_z(tz).unwrap(), 100_000, 4);
        worst = worst.max((trace - 2.0 * tz.sin().powi(2)).abs());
    }
    let (e1, e2) = (displacement_x(FRAC_PI_2).unwrap(), displacement_z(FRAC_PI_2).unwrap());
    let trace = trace_of(&e1, &e2, 100_000, 4);
    let diamond = diamond_of(&e1, &e2, 200_000, 4, false);
    s.record("displacement corner", trace, diamond);
    let ok = worst <= 1e-2 && (trace - SQRT_2).abs() <= 1e-2 && (diamond - SQRT_2).abs() <= 1e-2;
    s.check(
        "4 displacement limits",
        ok,
        format!(
            "theta_x=0 edge max |trace - 2 sin^2| {worst:.3e}; corner trace {trace:.6}, diamond {diamond:.6} (sqrt 2 +- 1e-2)"
        ),
    );
}

fn bell_formula(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let root = (s2 * s2 + 4.0 * (1.0 - c).powi(2)).sqrt();
    s2 / 2.0 + (s2 + root).abs() / 4.0 + (s2 - root).abs() / 4.0
}

fn criterion_5(s: &mut Suite) {
    let bell = maximally_entangled();
    let id = Channel::identity();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let tz = FRAC_PI_2 * k as f64 / 49.0;
        let d = distance_for_input(&displacement_z(tz).unwrap(), &id, &bell).unwrap();
        worst = worst.max((d - bell_formula(tz)).abs());
    }
    let top = distance_for_input(&displacement_z(FRAC_PI_2).unwrap(), &id, &bell).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let trace = trace_of(&displacement_z(FRAC_PI_2).unwrap(), &id, 100_000, 5);
    let ok = worst <= 1e-10 && (top - golden).abs() <= 1e-10 && top < trace;
    s.check(
        "5 bell input",
        ok,
        format!(
            "max deviation on 50 points {worst:.3e} (<= 1e-10); at pi/2 {top:.12} vs (1+sqrt5)/2, trace {trace:.6}"
        ),
    );
}

fn criterion_6(s: &mut Suite) {
    let (e1, e2) = (depolarizing(0.75).unwrap(), displacement_z(0.0).unwrap());
    let trace = trace_of(&e1, &e2, 100_000, 6);
    let diamond = diamond_of(&e1, &e2, 200_000, 6, false);
    s.record("depolarizing corner", trace, diamond);
    let ok = (trace - 1.0).abs() <= 1e-2 && (diamond - 1.5).abs() <= 2e-2 && diamond - trace > 0.4;
    s.check(
        "6 depolarizing corner",
        ok,
        format!("trace {trace:.6} (1 +- 1e-2), diamond {diamond:.6} (1.5 +- 2e-2), gap {:.4} (> 0.4)", diamond - trace),
    );
}

fn matrix_units() -> Vec<ComplexMatrix> {
    (0..4)
        .map(|k| {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(k / 2, k % 2)] = Complex64::new(1.0, 0.0);
            m
        })
        .collect()
}

/// Worst deviation of `sum A X B^dagger` from `E1(X) - E2(X)` over the matrix units.
fn reconstruction_error(d: &DifferenceDecomposition, e1: &Channel, e2: &Channel) -> f64 {
    matrix_units()
        .iter()
        .map(|x| d.apply(x).max_abs_diff(&(&e1.kraus().apply_operator(x) - &e2.kraus().apply_operator(x))))
        .fold(0.0, f64::max)
}

fn criterion_7(s: &mut Suite) {
    let mut pairs = vec![sacchi_pair()];
    for (c1, c2) in [(0.2, 0.5), (0.5, 0.8), (0.8, 0.2)] {
        pairs.push((bit_flip(c1).unwrap(), phase_flip(c2).unwrap()));
    }
    for (q1, q2) in random_pauli_pairs(7, 20) {
        pairs.push((pauli_channel(q1), pauli_channel(q2)));
    }
    let (mut worst_gap, mut worst_rec): (f64, f64) = (0.0, 0.0);
    for (k, (e1, e2)) in pairs.iter().enumerate() {
        let f = diamond_of(e1, e2, 200_000, 70 + k as u64, false);
        let kv = kitaev_of(e1, e2, 200_000, 70 + k as u64);
        worst_gap = worst_gap.max((f - kv).abs());
        let svd_route = decompose_sigma(&build_sigma(e1.kraus(), e2.kraus()).unwrap()).unwrap();
        let alt = alt_decomposition(e1.kraus(), e2.kraus()).unwrap();
        worst_rec = worst_rec.max(reconstruction_error(&svd_route, e1, e2)).max(reconstruction_error(&alt, e1, e2));
    }
    s.check(
        "7 kitaev vs fano",
        worst_gap <= 3e-2 && worst_rec <= 1e-9,
        format!(
            "max |K - F| over {} pairs {worst_gap:.3e} (<= 3e-2); max reconstruction error {worst_rec:.3e} (<= 1e-9)",
            pairs.len()
        ),
    );
}

fn criterion_8(s: &mut Suite) {
    let (e1, e2) = sacchi_pair();
    let mut exponents: Vec<f64> = (0..15)
        .map(|seed| {
            let r = diamond_distance_f(&e1, &e2, &SearchConfig::new(100_000, seed), true).unwrap();
            fit_power_law(&convergence_error_trace(&r, 2.0).unwrap()).unwrap()
        })
        .collect();
    exponents.sort_by(f64::total_cmp);
    let median = exponents[exponents.len() / 2];
    s.check(
        "8 convergence scaling",
        (-1.3..=-0.7).contains(&median),
        format!(
            "median exponent over 15 seeds {median:.3} (in [-1.3, -0.7]); range [{:.3}, {:.3}]",
            exponents[0],
            exponents[exponents.len() - 1]
        ),
    );
}

fn criterion_9(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let round_trip = (0..1000)
        .map(|k| {
            let xi = if k % 2 == 0 { common::random_density(&mut rng, 4) } else { common::random_pure(&mut rng, 4) };
            density_from_fano(&fano_from_density(&xi).unwrap()).unwrap().matrix().max_abs_diff(xi.matrix())
        })
        .fold(0.0, f64::max);

    let (mut pathway, mut bottom_row_exact) = (0.0f64, true);
    for k in 0..100 {
        let e = common::random_channel(&mut rng, k);
        let xi = common::random_density(&mut rng, 4);
        let by_kraus = e.kraus().apply_extended(&xi).unwrap();
        let by_fano = density_from_fano(&apply_affine(&e.extended(), &fano_from_density(&xi).unwrap())).unwrap();
        pathway = pathway.max(by_kraus.matrix().max_abs_diff(by_fano.matrix()));
        bottom_row_exact &= e.affine().matrix()[3] == [0.0, 0.0, 0.0, 1.0];
    }

    // Sweep grids: diamond must not fall below trace beyond sampling error.
    let steps: Vec<f64> = (0..5).map(|k| FRAC_PI_2 * k as f64 / 4.0).collect();
    for &tx in &steps {
        for &tz in &steps {
            let (e1, e2) = (displacement_x(tx).unwrap(), displacement_z(tz).unwrap());
            let (t, d) = (trace_of(&e1, &e2, 20_000, 90), diamond_of(&e1, &e2, 20_000, 90, false));
            s.record(format!("displacement sweep ({tx:.3}, {tz:.3})"), t, d);
        }
    }
    for p in [0.0, 0.25, 0.5, 0.75] {
        for &tz in &steps {
            let (e1, e2) = (depolarizing(p).unwrap(), displacement_z(tz).unwrap());
            let (t, d) = (trace_of(&e1, &e2, 20_000, 91), diamond_of(&e1, &e2, 20_000, 91, false));
            s.record(format!("depolarizing sweep ({p}, {tz:.3})"), t, d);
        }
    }
    let mut order_violations = Vec::new();
    let mut probabilities_ok = true;
    for (label, t, d) in &s.pairs {
        if *d < t - MC_ORDER_TOL {
            order_violations.push(label.clone());
        }
        let p = error_probabilities(*t, d.max(*t)).unwrap();
        let raw_p_e = 0.5 - d / 4.0;
        probabilities_ok &= p.p_e <= p.p_e_prime && raw_p_e <= p.p_e_prime + MC_ORDER_TOL / 4.0;
    }
    let ok =
        round_trip <= 1e-12 && pathway <= 1e-10 && bottom_row_exact && order_violations.is_empty() && probabilities_ok;
    s.check(
        "9 property suites",
        ok,
        format!(
            "fano round trip {round_trip:.3e} (<= 1e-12); kraus vs fano {pathway:.3e} (<= 1e-10); bottom row exact {bottom_row_exact}; \
             diamond >= trace - {MC_ORDER_TOL:e} and p_E <= p'_E on {} pairs (violations: {order_violations:?})",
            s.pairs.len()
        ),
    );
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let start = Instant::now();
    criterion_1(&mut suite);
    criterion_2(&mut suite);
    criterion_3(&mut suite);
    criterion_4(&mut suite);
    criterion_5(&mut suite);
    criterion_6(&mut suite);
    criterion_7(&mut suite);
    criterion_8(&mut suite);
    criterion_9(&mut suite);
    println!("acceptance: {} failed, {:.1} s", suite.failed.len(), start.elapsed().as_secs_f64());
    if suite.failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
