//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! The rotations diagonalize `A^dagger A` implicitly: they act on the columns
//! of `A` until the columns are mutually orthogonal, so the right singular
//! vectors are the accumulated rotations and the singular values are the
//! column norms. Working on `A` rather than on the explicit Gram matrix keeps
//! small singular values accurate.

use num_complex::Complex64;

use super::eigen::jacobi_rotation;
use super::matrix::{ComplexMatrix, ZERO};
use super::Tolerances;
use crate::error::{Error, Result};

/// `A = U diag(s) V^dagger` with `s` nonincreasing.
///
/// For an `m x n` input `U` is `m x k` and `V` is `n x k`, `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut a = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let uik = self.u[(i, k)] * s;
                for j in 0..n {
                    a[(i, j)] += uik * self.v[(j, k)].conj();
                }
            }
        }
        a
    }

    /// Number of singular values above `rel_cutoff * s_max`.
    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rel_cutoff * smax).count()
    }
}

fn column_dot(w: &ComplexMatrix, p: usize, q: usize) -> Complex64 {
    (0..w.rows()).map(|i| w[(i, p)].conj() * w[(i, q)]).sum()
}

fn column_norm_sqr(w: &ComplexMatrix, p: usize) -> f64 {
    (0..w.rows()).map(|i| w[(i, p)].norm_sqr()).sum()
}

fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, g: (Complex64, Complex64, Complex64, Complex64)) {
    let (gpp, gpq, gqp, gqq) = g;
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * gpp + mq * gqp;
        m[(k, q)] = mp * gpq + mq * gqq;
    }
}

/// Orthogonalizes the columns of the tall matrix `w` in place.
fn one_sided_jacobi(w: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>, tol: &Tolerances) -> Result<()> {
    let n = w.cols();
    // Columns this small relative to the largest are numerically null.
    let negligible = 1e-30 * (0..n).map(|j| column_norm_sqr(w, j)).fold(0.0, f64::max);
    for _ in 0..tol.max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = column_norm_sqr(w, p);
                let beta = column_norm_sqr(w, q);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = column_dot(w, p, q);
                if gamma.norm() <= tol.orthogonality * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(w, p, q, g);
                if let Some(v) = v.as_deref_mut() {
                    rotate_columns(v, p, q, g);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    let mut residual = 0.0_f64;
    for p in 0..n {
        for q in p + 1..n {
            let (alpha, beta) = (column_norm_sqr(w, p), column_norm_sqr(w, q));
            if alpha > negligible && beta > negligible {
                residual = residual.max(column_dot(w, p, q).norm() / (alpha * beta).sqrt());
            }
        }
    }
    if residual <= 10.0 * tol.orthogonality {
        return Ok(());
    }
    Err(Error::NoConvergence { sweeps: tol.max_sweeps, residual })
}

/// Extends the orthonormal columns `0..filled` of `u` to `u.cols()` orthonormal columns.
fn complete_orthonormal(u: &mut ComplexMatrix, filled: &[bool]) {
    let m = u.rows();
    for j in 0..u.cols() {
        if filled[j] {
            continue;
        }
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..m {
            let mut cand = vec![ZERO; m];
            cand[e] = Complex64::new(1.0, 0.0);
            // Two Gram-Schmidt passes against every column already present.
            for _ in 0..2 {
                for k in 0..u.cols() {
                    if k == j || (!filled[k] && k > j) {
                        continue;
                    }
                    let dot: Complex64 = (0..m).map(|i| u[(i, k)].conj() * cand[i]).sum();
                    for (i, c) in cand.iter_mut().enumerate() {
                        *c -= dot * u[(i, k)];
                    }
                }
            }
            let norm = cand.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("at least one candidate");
        let col: Vec<Complex64> = cand.iter().map(|x| x / norm).collect();
        u.set_column(j, &col);
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    svd_with(a, &Tolerances::default())
}

pub fn svd_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<Svd> {
    a.check_size()?;
    if a.rows() < a.cols() {
        let t = svd_with(&a.adjoint(), tol)?;
        return Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    let n = a.cols();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    one_sided_jacobi(&mut w, Some(&mut v), tol)?;

    let norms: Vec<f64> = (0..n).map(|j| column_norm_sqr(&w, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = norms[order[0]];

    let mut u = ComplexMatrix::zeros(a.rows(), n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut filled = vec![false; n];
    let mut singular_values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        singular_values.push(s);
        v_sorted.set_column(dst, &v.column(src));
        if s > 0.0 && s > tol.null_singular * smax {
            let col: Vec<Complex64> = w.column(src).iter().map(|x| x / s).collect();
            u.set_column(dst, &col);
            filled[dst] = true;
        }
    }
    complete_orthonormal(&mut u, &filled);
    Ok(Svd { u, singular_values, v: v_sorted })
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    a.check_size()?;
    let mut w = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    one_sided_jacobi(&mut w, None, &Tolerances::default())?;
    let mut s: Vec<f64> = (0..w.cols()).map(|j| column_norm_sqr(&w, j).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Sum of singular values (trace norm of an arbitrary square matrix).
pub fn nuclear_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}
