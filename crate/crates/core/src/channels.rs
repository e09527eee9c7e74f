//! Single-qubit channels in Kraus and affine (Fano) form.
//!
//! The affine matrix `M` acts on Bloch coordinates `[x, y, z, 1]`; its rows
//! and columns follow the Pauli order `x, y, z, I`. Entry `M_ab` equals
//! `(1/2) Tr[sigma_a E(sigma_b)]`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::pauli::{self, I};
use crate::states::{BlochVector, DensityMatrix, FanoVector};

/// Trace-preservation tolerance for Kraus operators.
pub const KRAUS_TP_TOL: f64 = 1e-10;
/// Slack allowed when checking that Bloch-ball points stay in the ball.
pub const BLOCH_CONTAINMENT_TOL: f64 = 1e-10;
/// Allowed deviation of Pauli weights from summing to one.
pub const PAULI_SUM_TOL: f64 = 1e-12;

/// Kraus operators `E_k` with `sum_k E_k^dagger E_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() || operators.len() > 4 {
            return Err(Error::InvalidChannel(format!("{} Kraus operators; expected 1 to 4", operators.len())));
        }
        if let Some(op) = operators.iter().find(|op| op.rows() != 2 || op.cols() != 2) {
            return Err(Error::InvalidChannel(format!("Kraus operator is {}x{}, expected 2x2", op.rows(), op.cols())));
        }
        let channel = Self { operators };
        let dev = channel.completeness().max_abs_diff(&ComplexMatrix::identity(2));
        if dev > KRAUS_TP_TOL {
            return Err(Error::InvalidChannel(format!(
                "sum of E_k^dagger E_k deviates from the identity by {dev:.3e}"
            )));
        }
        Ok(channel)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `sum_k E_k^dagger E_k`.
    pub fn completeness(&self) -> ComplexMatrix {
        self.operators.iter().fold(ComplexMatrix::zeros(2, 2), |acc, e| &acc + &(&e.adjoint() * e))
    }

    /// `sum_k E_k X E_k^dagger` for any 2x2 operator `X`.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.operators.iter().fold(ComplexMatrix::zeros(2, 2), |acc, e| &acc + &(&(e * x) * &e.adjoint()))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::InvalidState("single-qubit channel applied to a two-qubit state".into()));
        }
        Ok(DensityMatrix::new_unchecked(self.apply_operator(rho.matrix())))
    }

    /// `(I (x) E)(X)` on a 4x4 operator, ancilla on the left.
    pub fn apply_extended_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        self.operators.iter().fold(ComplexMatrix::zeros(4, 4), |acc, e| {
            let ext = id.kron(e);
            &acc + &(&(&ext * x) * &ext.adjoint())
        })
    }

    pub fn apply_extended(&self, xi: &DensityMatrix) -> Result<DensityMatrix> {
        if xi.dim() != 4 {
            return Err(Error::InvalidState("extended channel acts on two-qubit states".into()));
        }
        Ok(DensityMatrix::new_unchecked(self.apply_extended_operator(xi.matrix())))
    }

    /// Choi-type operator `sum_jk |j><k| (x) E(|j><k|)`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        choi_from(|x| self.apply_operator(x))
    }
}

fn choi_from(map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut choi = ComplexMatrix::zeros(4, 4);
    for j in 0..2 {
        for k in 0..2 {
            let mut unit = ComplexMatrix::zeros(2, 2);
            unit[(j, k)] = Complex64::new(1.0, 0.0);
            let image = map(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * j + a, 2 * k + b)] = image[(a, b)];
                }
            }
        }
    }
    choi
}

/// Affine map on `[x, y, z, 1]`.
///
/// Construction checks trace preservation (bottom row exactly `[0, 0, 0, 1]`)
/// and that sampled points of the Bloch ball stay inside it. Complete
/// positivity is not part of the type; see [`AffineChannel::is_completely_positive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChannel {
    m: [[f64; 4]; 4],
}

impl AffineChannel {
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        if m[I] != [0.0, 0.0, 0.0, 1.0] {
            return Err(Error::InvalidChannel(format!("bottom row {:?} is not [0, 0, 0, 1]", m[I])));
        }
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidChannel("non-finite affine entry".into()));
        }
        let channel = Self { m };
        let worst = fibonacci_sphere(256).map(|r| channel.apply(&r).length()).fold(0.0, f64::max);
        if worst > 1.0 + BLOCH_CONTAINMENT_TOL {
            return Err(Error::InvalidChannel(format!("maps a Bloch-sphere point to radius {worst:.6}")));
        }
        Ok(channel)
    }

    pub fn identity() -> Self {
        Self { m: diag4([1.0, 1.0, 1.0, 1.0]) }
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn apply(&self, r: &BlochVector) -> BlochVector {
        let mut out = [0.0; 4];
        for (a, row) in self.m.iter().enumerate() {
            out[a] = row.iter().zip(&r.0).map(|(m, x)| m * x).sum();
        }
        BlochVector(out)
    }

    /// Linear extension to an arbitrary 2x2 operator.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let coeffs: Vec<Complex64> = (0..4).map(|b| pauli::SINGLE[b].trace_product(x)).collect();
        let mut out = ComplexMatrix::zeros(2, 2);
        for a in 0..4 {
            let w: Complex64 = (0..4).map(|b| coeffs[b] * self.m[a][b]).sum::<Complex64>() * 0.5;
            out = &out + &pauli::matrix(a).scale(w);
        }
        out
    }

    pub fn choi_matrix(&self) -> ComplexMatrix {
        choi_from(|x| self.apply_operator(x))
    }

    /// Positivity of the Choi matrix down to `-tol`.
    pub fn is_completely_positive(&self, tol: f64) -> Result<bool> {
        Ok(hermitian_eigenvalues(&self.choi_matrix())?[0] >= -tol)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|a| (0..4).all(|b| a == b || self.m[a][b] == 0.0))
    }
}

fn diag4(d: [f64; 4]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

fn fibonacci_sphere(n: usize) -> impl Iterator<Item = BlochVector> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(move |i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            BlochVector::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .chain([
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(-1.0, 0.0, 0.0),
            BlochVector::new(0.0, 1.0, 0.0),
            BlochVector::new(0.0, -1.0, 0.0),
            BlochVector::new(0.0, 0.0, 1.0),
            BlochVector::new(0.0, 0.0, -1.0),
        ])
}

/// `M_ab = (1/2) Tr[sigma_a sum_k E_k sigma_b E_k^dagger]`.
pub fn affine_from_kraus(k: &KrausChannel) -> Result<AffineChannel> {
    let mut m = [[0.0; 4]; 4];
    for b in 0..4 {
        let image = k.apply_operator(&pauli::matrix(b));
        for (a, row) in m.iter_mut().enumerate() {
            row[b] = 0.5 * pauli::SINGLE[a].trace_product(&image).re;
        }
    }
    // Trace preservation makes the bottom row [0, 0, 0, 1] up to round-off.
    for (b, v) in m[I].iter().enumerate() {
        let want = if b == I { 1.0 } else { 0.0 };
        if (v - want).abs() > KRAUS_TP_TOL {
            return Err(Error::InvalidChannel(format!("map is not trace preserving (M_I{} = {v})", pauli::LABELS[b])));
        }
    }
    m[I] = [0.0, 0.0, 0.0, 1.0];
    AffineChannel::new(m)
}

/// `I (x) M` as a 16x16 block-diagonal matrix acting on [`FanoVector`] coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedAffine {
    m: [[f64; 16]; 16],
}

impl ExtendedAffine {
    pub fn matrix(&self) -> &[[f64; 16]; 16] {
        &self.m
    }

    /// Applies the map to arbitrary coefficients (no `R_II` requirement).
    pub fn apply_coefficients(&self, r: &[f64; 16]) -> [f64; 16] {
        let mut out = [0.0; 16];
        for (i, row) in self.m.iter().enumerate() {
            // Block-diagonal: only the four entries of the matching block contribute.
            let base = 4 * (i / 4);
            out[i] = (0..4).map(|j| row[base + j] * r[base + j]).sum();
        }
        out
    }
}

pub fn extend_with_ancilla(m: &AffineChannel) -> ExtendedAffine {
    let mut out = [[0.0; 16]; 16];
    for blk in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                out[4 * blk + a][4 * blk + b] = m.m[a][b];
            }
        }
    }
    ExtendedAffine { m: out }
}

/// `R' = (I (x) M) R`. Keeps `R_II = 1` because the bottom row of `M` is `[0, 0, 0, 1]`.
pub fn apply_affine(m2: &ExtendedAffine, r: &FanoVector) -> FanoVector {
    FanoVector::new_unchecked(m2.apply_coefficients(r.coefficients()))
}

/// Pauli-channel probabilities `(q_I, q_x, q_y, q_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliWeights {
    pub q_i: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
}

impl PauliWeights {
    pub fn new(q_i: f64, q_x: f64, q_y: f64, q_z: f64) -> Result<Self> {
        let w = Self { q_i, q_x, q_y, q_z };
        for (name, v) in [("q_I", q_i), ("q_x", q_x), ("q_y", q_y), ("q_z", q_z)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidChannel(format!("Pauli weight {name} = {v} is negative")));
            }
        }
        let sum = q_i + q_x + q_y + q_z;
        if (sum - 1.0).abs() > PAULI_SUM_TOL {
            return Err(Error::InvalidChannel(format!("Pauli weights sum to {sum}, expected 1")));
        }
        Ok(w)
    }

    /// Weights in Fano label order `x, y, z, I`.
    pub fn by_label(&self) -> [f64; 4] {
        [self.q_x, self.q_y, self.q_z, self.q_i]
    }

    /// Contraction factors `(c_x, c_y, c_z)` of the Bloch axes.
    pub fn contractions(&self) -> [f64; 3] {
        [1.0 - 2.0 * (self.q_y + self.q_z), 1.0 - 2.0 * (self.q_z + self.q_x), 1.0 - 2.0 * (self.q_x + self.q_y)]
    }
}

/// A channel carried in both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    name: String,
    kraus: KrausChannel,
    affine: AffineChannel,
    pauli: Option<PauliWeights>,
}

impl Channel {
    /// Wraps user-supplied Kraus operators; the affine form is derived.
    pub fn from_kraus(name: impl Into<String>, kraus: KrausChannel) -> Result<Self> {
        let affine = affine_from_kraus(&kraus)?;
        Ok(Self { name: name.into(), kraus, affine, pauli: None })
    }

    pub fn identity() -> Self {
        pauli_channel(PauliWeights { q_i: 1.0, q_x: 0.0, q_y: 0.0, q_z: 0.0 }).renamed("identity")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kraus(&self) -> &KrausChannel {
        &self.kraus
    }

    pub fn affine(&self) -> &AffineChannel {
        &self.affine
    }

    /// Weights when the channel was built as a Pauli channel.
    pub fn pauli_weights(&self) -> Option<&PauliWeights> {
        self.pauli.as_ref()
    }

    pub fn extended(&self) -> ExtendedAffine {
        extend_with_ancilla(&self.affine)
    }

    fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

pub fn pauli_channel(q: PauliWeights) -> Channel {
    let ops = q
        .by_label()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(a, &w)| pauli::matrix(a).scale_real(w.sqrt()))
        .collect();
    let [cx, cy, cz] = q.contractions();
    Channel {
        name: format!("pauli(q_I={}, q_x={}, q_y={}, q_z={})", q.q_i, q.q_x, q.q_y, q.q_z),
        kraus: KrausChannel { operators: ops },
        affine: AffineChannel { m: diag4([cx, cy, cz, 1.0]) },
        pauli: Some(q),
    }
}

/// `rho -> (1+c)/2 rho + (1-c)/2 sigma_x rho sigma_x`, `c` in `[-1, 1]`.
pub fn bit_flip(c: f64) -> Result<Channel> {
    check_range("c", c, -1.0, 1.0)?;
    let q = PauliWeights::new((1.0 + c) / 2.0, (1.0 - c) / 2.0, 0.0, 0.0)?;
    Ok(pauli_channel(q).renamed(format!("bit_flip(c={c})")))
}

/// `rho -> (1+c)/2 rho + (1-c)/2 sigma_z rho sigma_z`, `c` in `[-1, 1]`.
pub fn phase_flip(c: f64) -> Result<Channel> {
    check_range("c", c, -1.0, 1.0)?;
    let q = PauliWeights::new((1.0 + c) / 2.0, 0.0, 0.0, (1.0 - c) / 2.0)?;
    Ok(pauli_channel(q).renamed(format!("phase_flip(c={c})")))
}

/// Depolarizing channel `q_I = 1 - p`, `q_x = q_y = q_z = p/3`, `p` in `[0, 3/4]`.
pub fn depolarizing(p: f64) -> Result<Channel> {
    check_range("p", p, 0.0, 0.75)?;
    let q = PauliWeights::new(1.0 - p, p / 3.0, p / 3.0, p / 3.0)?;
    Ok(pauli_channel(q).renamed(format!("depolarizing(p={p})")))
}

/// Displacement of the Bloch ball towards `+z`; `theta = pi/2` collapses it onto the north pole.
///
/// Realized as amplitude damping with Kraus pair `[[1, 0], [0, C]]`, `[[0, S], [0, 0]]`.
pub fn displacement_z(theta: f64) -> Result<Channel> {
    check_range("theta_z", theta, 0.0, FRAC_PI_2)?;
    let (s, c) = theta.sin_cos();
    let kraus = KrausChannel {
        operators: vec![
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, c]]),
            ComplexMatrix::from_real_rows(&[[0.0, s], [0.0, 0.0]]),
        ],
    };
    let affine =
        AffineChannel { m: [[c, 0.0, 0.0, 0.0], [0.0, c, 0.0, 0.0], [0.0, 0.0, c * c, s * s], [0.0, 0.0, 0.0, 1.0]] };
    Ok(Channel { name: format!("displacement_z(theta={theta})"), kraus, affine, pauli: None })
}

/// Displacement towards `+x`: the `+z` displacement conjugated by a Hadamard rotation.
pub fn displacement_x(theta: f64) -> Result<Channel> {
    check_range("theta_x", theta, 0.0, FRAC_PI_2)?;
    let (s, c) = theta.sin_cos();
    let h = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, -1.0]]).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    let z = displacement_z(theta)?;
    let operators = z.kraus.operators.iter().map(|e| &(&h * e) * &h).collect();
    let affine =
        AffineChannel { m: [[c * c, 0.0, 0.0, s * s], [0.0, c, 0.0, 0.0], [0.0, 0.0, c, 0.0], [0.0, 0.0, 0.0, 1.0]] };
    Ok(Channel {
        name: format!("displacement_x(theta={theta})"),
        kraus: KrausChannel { operators },
        affine,
        pauli: None,
    })
}

/// `E1 = rho/2 + (X rho X)/4 + (Y rho Y)/4` and `E2 = Z rho Z`: distinguishable with
/// certainty using an ancilla, but only up to trace distance 3/2 without one.
pub fn sacchi_pair() -> (Channel, Channel) {
    let e1 = pauli_channel(PauliWeights { q_i: 0.5, q_x: 0.25, q_y: 0.25, q_z: 0.0 });
    let e2 = pauli_channel(PauliWeights { q_i: 0.0, q_x: 0.0, q_y: 0.0, q_z: 1.0 });
    (e1, e2)
}
