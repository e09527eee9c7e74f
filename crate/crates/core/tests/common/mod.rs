#![allow(dead_code)]

use chandist::channels::{
    bit_flip, depolarizing, displacement_x, displacement_z, pauli_channel, phase_flip, Channel, KrausChannel,
    PauliWeights,
};
use chandist::linalg::{hermitian_eig, ComplexMatrix};
use chandist::states::DensityMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data =
        (0..rows * cols).map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

/// `G G^dagger / Tr(G G^dagger)` for a Gaussian `G`.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr)).unwrap()
}

pub fn random_pure<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, 1);
    let norm = g.frobenius_norm();
    DensityMatrix::pure(&g.scale_real(1.0 / norm).column(0)).unwrap()
}

/// Uniform on the probability simplex.
pub fn random_pauli_weights<R: Rng>(rng: &mut R) -> PauliWeights {
    let e: Vec<f64> = (0..4).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    let q_x = e[1] / s;
    let q_y = e[2] / s;
    let q_z = e[3] / s;
    PauliWeights::new(1.0 - q_x - q_y - q_z, q_x, q_y, q_z).unwrap()
}

/// Kraus operators `V_k S^{-1/2}` from Gaussian `V_k`, `S = sum_k V_k^dagger V_k`.
pub fn random_kraus_channel<R: Rng>(rng: &mut R, n_ops: usize) -> Channel {
    let raw: Vec<ComplexMatrix> = (0..n_ops).map(|_| gaussian_matrix(rng, 2, 2)).collect();
    let mut s = ComplexMatrix::zeros(2, 2);
    for v in &raw {
        s = &s + &(&v.adjoint() * v);
    }
    let inv_sqrt = hermitian_eig(&s).unwrap().map_spectrum(|l| 1.0 / l.sqrt());
    let ops = raw.iter().map(|v| v * &inv_sqrt).collect();
    Channel::from_kraus("random", KrausChannel::new(ops).unwrap()).unwrap()
}

/// A library or random channel, cycling through every constructor.
pub fn random_channel<R: Rng>(rng: &mut R, k: usize) -> Channel {
    let t = rng.random_range(0.0..=std::f64::consts::FRAC_PI_2);
    match k % 7 {
        0 => pauli_channel(random_pauli_weights(rng)),
        1 => bit_flip(rng.random_range(-1.0..=1.0)).unwrap(),
        2 => phase_flip(rng.random_range(-1.0..=1.0)).unwrap(),
        3 => depolarizing(rng.random_range(0.0..=0.75)).unwrap(),
        4 => displacement_x(t).unwrap(),
        5 => displacement_z(t).unwrap(),
        _ => random_kraus_channel(rng, 1 + k % 4),
    }
}
