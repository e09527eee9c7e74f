//! Density matrices and their Fano (Pauli-basis) coefficients for one and two qubits.
//!
//! Two-qubit basis order is `|00>, |01>, |10>, |11>` with the ancilla as the
//! left factor. Fano coefficients are `R_ab = Tr[(sigma_a (x) sigma_b) xi]`,
//! stored at index `4a + b` with labels ordered `x, y, z, I`, so the vector
//! reads `[R_xx, R_xy, R_xz, R_xI, R_yx, ..., R_Iz, R_II]`. The same order is
//! used for serialization.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::pauli::{self, I};

/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a density matrix.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Largest imaginary residue accepted when reading Fano coefficients.
pub const FANO_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matches!(matrix.rows(), 2 | 4) || !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrices are 2x2 or 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        matrix.check_hermitian()?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lowest = hermitian_eigenvalues(&matrix)?[0];
        if lowest < EIGEN_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Projector onto a (normalized) pure state.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state vector has squared norm {norm}")));
        }
        Self::new(ComplexMatrix::outer(amplitudes, amplitudes))
    }

    pub(crate) fn pure_unchecked(amplitudes: &[Complex64]) -> Self {
        Self { matrix: ComplexMatrix::outer(amplitudes, amplitudes) }
    }

    /// Single-qubit state `(I + x sigma_x + y sigma_y + z sigma_z) / 2`.
    pub fn from_bloch(r: &BlochVector) -> Result<Self> {
        let len = r.length();
        if len > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!("Bloch vector length {len} exceeds 1")));
        }
        Ok(Self { matrix: qubit_operator_from_fano(&r.0) })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `self (x) other`, with `self` on the left (ancilla) factor.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        if self.dim() != 2 || other.dim() != 2 {
            return Err(Error::InvalidState("tensor products are formed from single-qubit states".into()));
        }
        Ok(Self { matrix: self.matrix.kron(&other.matrix) })
    }

    /// Bloch coordinates `[x, y, z, 1]` of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::InvalidState("Bloch vectors describe single-qubit states".into()));
        }
        let mut r = [0.0; 4];
        for (a, slot) in r.iter_mut().enumerate() {
            *slot = pauli::SINGLE[a].trace_product(&self.matrix).re;
        }
        r[I] = 1.0;
        Ok(BlochVector(r))
    }
}

/// Single-qubit Fano vector `[x, y, z, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 4]);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z, 1.0])
    }

    /// Point at radius `r`, polar angle `theta`, azimuth `phi`.
    pub fn from_spherical(r: f64, theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self([r * st * cp, r * st * sp, r * ct, 1.0])
    }

    pub fn length(&self) -> f64 {
        (self.0[0].powi(2) + self.0[1].powi(2) + self.0[2].powi(2)).sqrt()
    }

    /// Euclidean distance between the spatial parts; equals the trace distance of the states.
    pub fn distance(&self, other: &BlochVector) -> f64 {
        (0..3).map(|i| (self.0[i] - other.0[i]).powi(2)).sum::<f64>().sqrt()
    }
}

/// Sixteen two-qubit Fano coefficients in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoVector(pub(crate) [f64; 16]);

impl FanoVector {
    /// Requires `R_II = 1` and every entry in `[-1, 1]`.
    pub fn new(coefficients: [f64; 16]) -> Result<Self> {
        if coefficients[15] != 1.0 {
            return Err(Error::InvalidState(format!("R_II = {}, expected 1", coefficients[15])));
        }
        if let Some((k, v)) = coefficients.iter().enumerate().find(|(_, v)| v.abs() > 1.0 + 1e-12) {
            return Err(Error::InvalidState(format!("Fano coefficient {} = {v} outside [-1, 1]", label(k))));
        }
        Ok(Self(coefficients))
    }

    pub(crate) fn new_unchecked(coefficients: [f64; 16]) -> Self {
        Self(coefficients)
    }

    pub fn coefficients(&self) -> &[f64; 16] {
        &self.0
    }

    /// `R_ab` for Pauli label indices `a` (ancilla) and `b` (system).
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.0[4 * a + b]
    }
}

/// Name such as `R_xz` for the Fano index `k`.
pub fn label(k: usize) -> String {
    format!("R_{}{}", pauli::LABELS[k / 4], pauli::LABELS[k % 4])
}

/// Coefficients `Tr[(sigma_a (x) sigma_b) A]` of an arbitrary 4x4 matrix, keeping imaginary parts.
pub(crate) fn pauli_coefficients(a: &ComplexMatrix) -> [Complex64; 16] {
    let mut out = [Complex64::new(0.0, 0.0); 16];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = pauli::two_qubit(k / 4, k % 4).trace_product(a);
    }
    out
}

/// `(1/4) sum R_ab sigma_a (x) sigma_b` without any validation of `R`.
pub fn operator_from_fano(r: &[f64; 16]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (k, &coef) in r.iter().enumerate() {
        if coef != 0.0 {
            pauli::two_qubit(k / 4, k % 4).accumulate(&mut m, 0.25 * coef);
        }
    }
    m
}

/// `(1/2) sum r_a sigma_a` without validation.
pub fn qubit_operator_from_fano(r: &[f64; 4]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    for (a, &coef) in r.iter().enumerate() {
        pauli::SINGLE[a].accumulate(&mut m, 0.5 * coef);
    }
    m
}

pub fn fano_from_density(xi: &DensityMatrix) -> Result<FanoVector> {
    if xi.dim() != 4 {
        return Err(Error::InvalidState(format!("two-qubit state expected, got dimension {}", xi.dim())));
    }
    let raw = pauli_coefficients(xi.matrix());
    let mut r = [0.0; 16];
    for (k, z) in raw.iter().enumerate() {
        if z.im.abs() > FANO_IMAG_TOL {
            return Err(Error::InvalidState(format!(
                "{} has imaginary part {:.3e}; input is not Hermitian",
                label(k),
                z.im
            )));
        }
        r[k] = z.re;
    }
    // Tr(xi) = 1 up to the density-matrix tolerance; pin it.
    r[15] = 1.0;
    Ok(FanoVector(r))
}

pub fn density_from_fano(r: &FanoVector) -> Result<DensityMatrix> {
    if r.0[15] != 1.0 {
        return Err(Error::InvalidState(format!("R_II = {}, expected 1", r.0[15])));
    }
    DensityMatrix::new(operator_from_fano(&r.0))
}

/// Angles of the two-qubit pure-state parametrization.
///
/// Amplitudes are `C00 = cos t1 cos t2`, `C01 = cos t1 sin t2 e^{i p1}`,
/// `C10 = sin t1 cos t3 e^{i p2}`, `C11 = sin t1 sin t3 e^{i p3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateAngles {
    pub theta: [f64; 3],
    pub phi: [f64; 3],
}

impl PureStateAngles {
    /// Requires every `theta` in `[0, pi/2]` and every `phi` in `[0, 2pi)`.
    pub fn new(theta: [f64; 3], phi: [f64; 3]) -> Result<Self> {
        for &t in &theta {
            check_range("theta", t, 0.0, FRAC_PI_2)?;
        }
        for &p in &phi {
            check_range("phi", p, 0.0, 2.0 * PI)?;
            if p == 2.0 * PI {
                return Err(Error::OutOfRange { name: "phi", value: p, min: 0.0, max: 2.0 * PI });
            }
        }
        Ok(Self { theta, phi })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        let [t1, t2, t3] = self.theta;
        let [p1, p2, p3] = self.phi;
        [
            Complex64::new(t1.cos() * t2.cos(), 0.0),
            Complex64::from_polar(t1.cos() * t2.sin(), p1),
            Complex64::from_polar(t1.sin() * t3.cos(), p2),
            Complex64::from_polar(t1.sin() * t3.sin(), p3),
        ]
    }
}

/// Real-amplitude parametrization with signs: `t1` in `[0, pi/2]`, `t2, t3` in `[0, 2pi)`.
///
/// Covers every real two-qubit pure state up to a global sign, which the
/// phase-free restriction of [`PureStateAngles`] does not (it only reaches
/// nonnegative amplitudes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealStateAngles {
    pub theta: [f64; 3],
}

impl RealStateAngles {
    pub fn new(theta: [f64; 3]) -> Result<Self> {
        check_range("theta1", theta[0], 0.0, FRAC_PI_2)?;
        check_range("theta2", theta[1], 0.0, 2.0 * PI)?;
        check_range("theta3", theta[2], 0.0, 2.0 * PI)?;
        Ok(Self { theta })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        let [t1, t2, t3] = self.theta;
        [
            Complex64::new(t1.cos() * t2.cos(), 0.0),
            Complex64::new(t1.cos() * t2.sin(), 0.0),
            Complex64::new(t1.sin() * t3.cos(), 0.0),
            Complex64::new(t1.sin() * t3.sin(), 0.0),
        ]
    }
}

pub fn pure_state_from_angles(a: &PureStateAngles) -> DensityMatrix {
    DensityMatrix::pure_unchecked(&a.amplitudes())
}

pub fn real_pure_state(a: &RealStateAngles) -> DensityMatrix {
    DensityMatrix::pure_unchecked(&a.amplitudes())
}

/// Pure single-qubit state at polar angle `theta` and azimuth `phi`.
pub fn bloch_pure_state(theta: f64, phi: f64) -> (DensityMatrix, BlochVector) {
    let r = BlochVector::from_spherical(1.0, theta, phi);
    (DensityMatrix::new_unchecked(qubit_operator_from_fano(&r.0)), r)
}

/// Projector onto `(|00> + |11>) / sqrt(2)`.
pub fn maximally_entangled() -> DensityMatrix {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    DensityMatrix::pure_unchecked(&[s, zero, zero, s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{X, Y, Z};

    fn expect_only(r: &FanoVector, nonzero: &[((usize, usize), f64)]) {
        for a in 0..4 {
            for b in 0..4 {
                let want = nonzero.iter().find(|(k, _)| *k == (a, b)).map_or(0.0, |(_, v)| *v);
                assert!((r.get(a, b) - want).abs() < 1e-14, "{} = {} want {want}", label(4 * a + b), r.get(a, b));
            }
        }
    }

    #[test]
    fn maximally_mixed_fano() {
        let r = fano_from_density(&DensityMatrix::maximally_mixed(4).unwrap()).unwrap();
        expect_only(&r, &[((I, I), 1.0)]);
    }

    #[test]
    fn bell_fano() {
        let r = fano_from_density(&maximally_entangled()).unwrap();
        expect_only(&r, &[((X, X), 1.0), ((Y, Y), -1.0), ((Z, Z), 1.0), ((I, I), 1.0)]);
        let back = density_from_fano(&r).unwrap();
        assert!(back.matrix().max_abs_diff(maximally_entangled().matrix()) < 1e-15);
    }

    #[test]
    fn ground_state_fano() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let xi = DensityMatrix::pure(&[one, zero, zero, zero]).unwrap();
        let r = fano_from_density(&xi).unwrap();
        expect_only(&r, &[((Z, Z), 1.0), ((Z, I), 1.0), ((I, Z), 1.0), ((I, I), 1.0)]);
    }

    #[test]
    fn density_from_fano_rejects_unnormalized() {
        let mut c = [0.0; 16];
        c[15] = 0.5;
        assert!(density_from_fano(&FanoVector::new_unchecked(c)).is_err());
        assert!(FanoVector::new(c).is_err());
        c[15] = 1.0;
        let rho = density_from_fano(&FanoVector::new(c).unwrap()).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
    }

    #[test]
    fn non_hermitian_input_is_flagged() {
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        m[(1, 0)] = Complex64::new(0.0, 0.1);
        assert!(DensityMatrix::new(m.clone()).is_err());
        let r = pauli_coefficients(&m);
        assert!(r.iter().any(|z| z.im.abs() > FANO_IMAG_TOL));
        assert!(fano_from_density(&DensityMatrix::new_unchecked(m)).is_err());
    }

    #[test]
    fn angles_zero_give_ground_state() {
        let a = PureStateAngles::new([0.0; 3], [0.0; 3]).unwrap();
        let xi = pure_state_from_angles(&a);
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(xi.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn bell_angles() {
        let a = PureStateAngles::new([PI / 4.0, 0.0, FRAC_PI_2], [0.0; 3]).unwrap();
        assert!(pure_state_from_angles(&a).matrix().max_abs_diff(maximally_entangled().matrix()) < 1e-15);
        assert!((maximally_entangled().purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn angle_ranges_enforced() {
        assert!(PureStateAngles::new([0.0, 2.0, 0.0], [0.0; 3]).is_err());
        assert!(PureStateAngles::new([0.0; 3], [0.0, 2.0 * PI, 0.0]).is_err());
        assert!(PureStateAngles::new([0.0; 3], [0.0, -0.1, 0.0]).is_err());
        assert!(RealStateAngles::new([0.1, 6.0, 3.0]).is_ok());
        assert!(RealStateAngles::new([1.6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn bloch_poles_and_equator() {
        assert_eq!(bloch_pure_state(0.0, 0.0).1 .0, [0.0, 0.0, 1.0, 1.0]);
        let south = bloch_pure_state(PI, 0.0).1;
        assert!(south.distance(&BlochVector::new(0.0, 0.0, -1.0)) < 1e-15);
        let eq = bloch_pure_state(FRAC_PI_2, 0.0).1;
        assert!(eq.distance(&BlochVector::new(1.0, 0.0, 0.0)) < 1e-15);
        let (rho, r) = bloch_pure_state(1.1, 4.0);
        assert!((r.length() - 1.0).abs() < 1e-12);
        assert!(rho.bloch_vector().unwrap().distance(&r) < 1e-15);
    }
}
