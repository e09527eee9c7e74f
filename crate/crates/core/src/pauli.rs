//! Pauli matrices stored as signed permutations, in the order `x, y, z, I`.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Index of each Pauli label in every Fano-ordered array.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const I: usize = 3;

pub const LABELS: [char; 4] = ['x', 'y', 'z', 'I'];

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const NEG: Complex64 = Complex64::new(-1.0, 0.0);
const PI: Complex64 = Complex64::new(0.0, 1.0);
const NI: Complex64 = Complex64::new(0.0, -1.0);

/// A matrix with exactly one nonzero entry per row: `P[r][perm[r]] = phase[r]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Monomial<const N: usize> {
    pub perm: [usize; N],
    pub phase: [Complex64; N],
}

pub(crate) const SINGLE: [Monomial<2>; 4] = [
    Monomial { perm: [1, 0], phase: [ONE, ONE] },
    Monomial { perm: [1, 0], phase: [NI, PI] },
    Monomial { perm: [0, 1], phase: [ONE, NEG] },
    Monomial { perm: [0, 1], phase: [ONE, ONE] },
];

/// `sigma_a (x) sigma_b` for the Fano index `4a + b`; `a` acts on the ancilla (left factor).
pub(crate) fn two_qubit(a: usize, b: usize) -> Monomial<4> {
    let (pa, pb) = (&SINGLE[a], &SINGLE[b]);
    let mut perm = [0; 4];
    let mut phase = [ONE; 4];
    for i in 0..2 {
        for k in 0..2 {
            perm[2 * i + k] = 2 * pa.perm[i] + pb.perm[k];
            phase[2 * i + k] = pa.phase[i] * pb.phase[k];
        }
    }
    Monomial { perm, phase }
}

impl<const N: usize> Monomial<N> {
    /// `Tr(P A)`.
    pub fn trace_product(&self, a: &ComplexMatrix) -> Complex64 {
        (0..N).map(|r| self.phase[r] * a[(self.perm[r], r)]).sum()
    }

    /// `A += weight * P`.
    pub fn accumulate(&self, a: &mut ComplexMatrix, weight: f64) {
        for r in 0..N {
            a[(r, self.perm[r])] += self.phase[r] * weight;
        }
    }

    pub fn to_matrix(self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(N, N);
        self.accumulate(&mut m, 1.0);
        m
    }
}

/// Dense 2x2 Pauli matrix for label index `a` (`X`, `Y`, `Z` or `I`).
pub fn matrix(a: usize) -> ComplexMatrix {
    SINGLE[a].to_matrix()
}
