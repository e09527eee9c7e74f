//! Dense complex linear algebra for matrices up to 8x8.
//!
//! Everything here is a pure function of its inputs. Tolerances live in
//! [`Tolerances`]; the plain entry points use [`Tolerances::default`].

mod eigen;
mod matrix;
mod svd;

pub use eigen::{
    hermitian_eig, hermitian_eig_with, hermitian_eigenvalues, psd_sqrt, psd_sqrt_with, trace_norm, EigenDecomposition,
};
pub use matrix::ComplexMatrix;
pub use svd::{nuclear_norm, singular_values, svd, svd_with, Svd};

use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 8;

/// Allowed `|A_ij - conj(A_ji)|`, relative to `max(1, max |A_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, ||A||_F)`).
pub const OFFDIAG_TOL: f64 = 1e-13;

/// Eigenvalues in `[-PSD_FLOOR, 0)` count as round-off and are clamped to zero.
pub const PSD_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub offdiag: f64,
    pub psd_floor: f64,
    /// Column pairs with `|w_p^dagger w_q| <= orthogonality * |w_p| |w_q|` count as orthogonal.
    pub orthogonality: f64,
    /// Singular values at or below `null_singular * s_max` get completed left vectors.
    pub null_singular: f64,
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            offdiag: OFFDIAG_TOL,
            psd_floor: PSD_FLOOR,
            orthogonality: 1e-14,
            null_singular: 1e-14,
            max_sweeps: 60,
        }
    }
}

/// Fidelity `Tr sqrt(X^{1/2} Y X^{1/2})` of two positive-semidefinite matrices.
///
/// Neither argument needs unit trace. Evaluated as the trace norm of
/// `X^{1/2} Y^{1/2}`, which has the same value and is symmetric in the
/// arguments by construction.
pub fn fidelity_psd(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}x{} and {}x{} matrices",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let sx = psd_sqrt(x)?;
    let sy = psd_sqrt(y)?;
    nuclear_norm(&(&sx * &sy))
}
