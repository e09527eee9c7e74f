//! Diamond distance as a maximum output fidelity.
//!
//! The difference `E = E1 - E2` is written as `E(X) = sum_i A_i X B_i^dagger`,
//! either from the singular value decomposition of `sigma`, the image of the
//! unnormalized maximally entangled state under `I (x) E`, or directly from the
//! Kraus operators. With `Psi_A(rho)_ij = Tr(A_i rho A_j^dagger)` and likewise
//! for `B`, the diamond norm is the largest fidelity between `Psi_A(rho1)` and
//! `Psi_B(rho2)` over single-qubit states `rho1, rho2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{fidelity_psd, svd, ComplexMatrix};
use crate::search::{random_search, ParameterBox, SearchConfig, SearchResult};
use crate::states::BlochVector;

/// Singular values at or below this fraction of the largest are dropped.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Tolerance on the Hermiticity and tracelessness of `sigma`.
pub const SIGMA_TOL: f64 = 1e-10;

/// `sigma = sum_jk |j><k| (x) (E1 - E2)(|j><k|)`, ancilla on the left.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaOperator {
    matrix: ComplexMatrix,
}

impl SigmaOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn build_sigma(e1: &KrausChannel, e2: &KrausChannel) -> Result<SigmaOperator> {
    let matrix = &e1.choi_matrix() - &e2.choi_matrix();
    matrix.check_hermitian_with(SIGMA_TOL)?;
    let tr = matrix.trace().norm();
    if tr > SIGMA_TOL {
        return Err(Error::InvalidChannel(format!("sigma has trace {tr:e}")));
    }
    Ok(SigmaOperator { matrix })
}

/// Operator families with `E1(X) - E2(X) = sum_i A_i X B_i^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceDecomposition {
    a_ops: Vec<ComplexMatrix>,
    b_ops: Vec<ComplexMatrix>,
}

impl DifferenceDecomposition {
    pub fn new(a_ops: Vec<ComplexMatrix>, b_ops: Vec<ComplexMatrix>) -> Result<Self> {
        if a_ops.len() != b_ops.len() {
            return Err(Error::DimensionMismatch(format!("{} A operators, {} B operators", a_ops.len(), b_ops.len())));
        }
        if a_ops.len() > 8 {
            return Err(Error::InvalidArgument(format!("{} terms; at most 8 are supported", a_ops.len())));
        }
        if let Some(op) = a_ops.iter().chain(&b_ops).find(|op| op.rows() != 2 || op.cols() != 2) {
            return Err(Error::DimensionMismatch(format!("operator is {}x{}, expected 2x2", op.rows(), op.cols())));
        }
        Ok(Self { a_ops, b_ops })
    }

    pub fn a_ops(&self) -> &[ComplexMatrix] {
        &self.a_ops
    }

    pub fn b_ops(&self) -> &[ComplexMatrix] {
        &self.b_ops
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.a_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_ops.is_empty()
    }

    /// `sum_i A_i X B_i^dagger`.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2, 2);
        for (a, b) in self.a_ops.iter().zip(&self.b_ops) {
            out = &out + &(&(a * x) * &b.adjoint());
        }
        out
    }
}

/// Reshapes a 4-vector indexed by `2j + m` (ancilla `j`, system `m`) into `[[u0, u2], [u1, u3]]`.
fn reshape(u: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[u[0], u[2]], [u[1], u[3]]])
}

/// Decomposition from `sigma = sum_i |u_i><v_i|` with `u_i = sqrt(s_i) U_i`, `v_i = sqrt(s_i) V_i`.
pub fn decompose_sigma(sigma: &SigmaOperator) -> Result<DifferenceDecomposition> {
    let d = svd(&sigma.matrix)?;
    let rank = if sigma.matrix.max_abs() == 0.0 { 0 } else { d.rank(RANK_CUTOFF) };
    let mut a_ops = Vec::with_capacity(rank);
    let mut b_ops = Vec::with_capacity(rank);
    for i in 0..rank {
        let w = d.singular_values[i].sqrt();
        let u: Vec<Complex64> = d.u.column(i).iter().map(|z| z * w).collect();
        let v: Vec<Complex64> = d.v.column(i).iter().map(|z| z * w).collect();
        a_ops.push(reshape(&u));
        b_ops.push(reshape(&v));
    }
    DifferenceDecomposition::new(a_ops, b_ops)
}

/// Decomposition straight from the Kraus operators `F_k` of `E1` and `G_k` of `E2`.
///
/// The shorter list is padded with zeros; the pair `(F_k +- G_k)/sqrt(2)` and
/// `(G_k +- F_k)/sqrt(2)` gives `F_k X F_k^dagger - G_k X G_k^dagger`, so the
/// result has twice as many terms as the longer Kraus list.
pub fn alt_decomposition(e1: &KrausChannel, e2: &KrausChannel) -> Result<DifferenceDecomposition> {
    let (f, g) = (e1.operators(), e2.operators());
    let n = f.len().max(g.len());
    let zero = ComplexMatrix::zeros(2, 2);
    let mut a_ops = Vec::with_capacity(2 * n);
    let mut b_ops = Vec::with_capacity(2 * n);
    for k in 0..n {
        let fk = f.get(k).unwrap_or(&zero);
        let gk = g.get(k).unwrap_or(&zero);
        let plus = (fk + gk).scale_real(FRAC_1_SQRT_2);
        let minus = (fk - gk).scale_real(FRAC_1_SQRT_2);
        a_ops.push(plus.clone());
        a_ops.push(minus.clone());
        b_ops.push(minus);
        b_ops.push(plus);
    }
    DifferenceDecomposition::new(a_ops, b_ops)
}

/// `Psi(rho)_ij = Tr(O_i rho O_j^dagger)`, an unnormalized `M x M` positive matrix.
pub fn psi_apply(ops: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let images: Vec<ComplexMatrix> = ops.iter().map(|o| o * rho).collect();
    let n = ops.len();
    let mut psi = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // Tr(O_i rho O_j^dagger) = sum_{a,b} (O_i rho)_{ab} conj(O_j)_{ab}
            let mut z = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    z += images[i][(a, b)] * ops[j][(a, b)].conj();
                }
            }
            psi[(i, j)] = z;
            psi[(j, i)] = z.conj();
        }
    }
    psi
}

/// How the two single-qubit inputs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputSampling {
    /// Points of the Bloch ball: polar angle, azimuth and radius for each state.
    #[default]
    Mixed,
    /// Points of the Bloch sphere only.
    Pure,
}

pub fn fidelity_parameter_box(sampling: InputSampling) -> ParameterBox {
    match sampling {
        InputSampling::Mixed => ParameterBox::new(&[
            ("theta1", 0.0, PI),
            ("phi1", 0.0, 2.0 * PI),
            ("r1", 0.0, 1.0),
            ("theta2", 0.0, PI),
            ("phi2", 0.0, 2.0 * PI),
            ("r2", 0.0, 1.0),
        ]),
        InputSampling::Pure => ParameterBox::new(&[
            ("theta1", 0.0, PI),
            ("phi1", 0.0, 2.0 * PI),
            ("theta2", 0.0, PI),
            ("phi2", 0.0, 2.0 * PI),
        ]),
    }
}

/// The two input states for a point of [`fidelity_parameter_box`].
pub fn input_pair(params: &[f64], sampling: InputSampling) -> (BlochVector, BlochVector) {
    match sampling {
        InputSampling::Mixed => (
            BlochVector::from_spherical(params[2], params[0], params[1]),
            BlochVector::from_spherical(params[5], params[3], params[4]),
        ),
        InputSampling::Pure => (
            BlochVector::from_spherical(1.0, params[0], params[1]),
            BlochVector::from_spherical(1.0, params[2], params[3]),
        ),
    }
}

fn bloch_operator(r: &BlochVector) -> ComplexMatrix {
    let [x, y, z, _] = r.0;
    ComplexMatrix::from_rows(&[
        [Complex64::new((1.0 + z) / 2.0, 0.0), Complex64::new(x / 2.0, -y / 2.0)],
        [Complex64::new(x / 2.0, y / 2.0), Complex64::new((1.0 - z) / 2.0, 0.0)],
    ])
}

/// `F[Psi_A(rho1), Psi_B(rho2)]` for the given inputs.
pub fn output_fidelity(decomp: &DifferenceDecomposition, rho1: &BlochVector, rho2: &BlochVector) -> Result<f64> {
    if decomp.is_empty() {
        return Ok(0.0);
    }
    let pa = psi_apply(&decomp.a_ops, &bloch_operator(rho1));
    let pb = psi_apply(&decomp.b_ops, &bloch_operator(rho2));
    fidelity_psd(&pa, &pb)
}

/// Random search for the maximum output fidelity, which equals `||E1 - E2||_diamond`.
pub fn max_output_fidelity(
    decomp: &DifferenceDecomposition,
    cfg: &SearchConfig,
    sampling: InputSampling,
) -> Result<SearchResult> {
    random_search(&fidelity_parameter_box(sampling), cfg, |p| {
        let (r1, r2) = input_pair(p, sampling);
        output_fidelity(decomp, &r1, &r2)
    })
}

/// Diamond distance by the SVD route with the default sampling.
pub fn diamond_distance_k(e1: &KrausChannel, e2: &KrausChannel, cfg: &SearchConfig) -> Result<SearchResult> {
    let decomp = decompose_sigma(&build_sigma(e1, e2)?)?;
    max_output_fidelity(&decomp, cfg, InputSampling::default())
}
