//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! the classic real Jacobi rotation, so the transformation stays unitary and
//! the diagonal stays real throughout.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use super::Tolerances;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut m = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                let vik = v[(i, k)] * lambda;
                for j in 0..n {
                    m[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        m
    }

    /// Same eigenvectors with `f` applied to every eigenvalue.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        EigenDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|&x| f(x)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
        .reconstruct()
    }
}

/// Unitary 2x2 rotation `G` with `G^dagger [[app, apq], [conj(apq), aqq]] G` diagonal.
///
/// Returned as `(g_pp, g_pq, g_qp, g_qq)`.
pub(crate) fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let r = apq.norm();
    let phase = if r > 0.0 { (apq / r).conj() } else { Complex64::new(1.0, 0.0) };
    let theta = (aqq - app) / (2.0 * r);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    (Complex64::new(c, 0.0), Complex64::new(s, 0.0), phase * (-s), phase * c)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Runs Jacobi sweeps in place; accumulates rotations into `vectors` when given.
fn jacobi_sweeps(a: &mut ComplexMatrix, mut vectors: Option<&mut ComplexMatrix>, tol: &Tolerances) -> Result<()> {
    let n = a.rows();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(());
    }
    let threshold = tol.offdiag * scale.max(1.0);
    for _ in 0..tol.max_sweeps {
        if off_diagonal_norm(a) < threshold {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == ZERO {
                    continue;
                }
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                // A <- G^dagger A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * gpp + vkq * gqp;
                        v[(k, q)] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }
    let residual = off_diagonal_norm(a);
    if residual < threshold {
        Ok(())
    } else {
        Err(Error::NoConvergence { sweeps: tol.max_sweeps, residual })
    }
}

fn validate(a: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    a.check_square()?;
    a.check_size()?;
    a.check_hermitian_with(tol.hermitian)
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(a, &Tolerances::default())
}

pub fn hermitian_eig_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    validate(a, tol)?;
    let n = a.rows();
    let mut work = a.hermitian_part();
    let mut vectors = ComplexMatrix::identity(n);
    jacobi_sweeps(&mut work, Some(&mut vectors), tol)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = vectors[(i, src)];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Ascending eigenvalues only; skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let tol = Tolerances::default();
    validate(a, &tol)?;
    let mut work = a.hermitian_part();
    jacobi_sweeps(&mut work, None, &tol)?;
    let mut values: Vec<f64> = (0..a.rows()).map(|i| work[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `sum_k |lambda_k|` for a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.iter().map(|x| x.abs()).sum())
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-psd_floor, 0)` are treated as round-off and clamped to zero.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(p, &Tolerances::default())
}

pub fn psd_sqrt_with(p: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(p, tol)?;
    check_psd(&eig.eigenvalues, tol)?;
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

pub(crate) fn check_psd(eigenvalues: &[f64], tol: &Tolerances) -> Result<()> {
    let scale = eigenvalues.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
    match eigenvalues.iter().copied().find(|&x| x < -tol.psd_floor * scale) {
        Some(eigenvalue) => Err(Error::NotPositiveSemidefinite { eigenvalue }),
        None => Ok(()),
    }
}
