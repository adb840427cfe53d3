//! Dense complex linear algebra: matrices, Kronecker products, SVD, and
//! strided gate application to statevectors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

mod svd;

pub use svd::{svd, Svd};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// `matmul` operand shapes are incompatible.
    DimMismatch {
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    /// A gate addressed a qubit outside the register.
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    /// A gate listed the same target twice.
    DuplicateQubit { qubit: usize },
    /// Gate matrix dimension does not match its target count.
    MatrixSizeMismatch { dim: (usize, usize), qubits: usize },
    /// The Jacobi sweep limit was hit before the off-diagonal mass vanished.
    SvdNoConvergence { sweeps: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimMismatch { lhs, rhs } => {
                write!(
                    f,
                    "dimension mismatch: {}x{} * {}x{}",
                    lhs.0, lhs.1, rhs.0, rhs.1
                )
            }
            LinalgError::QubitOutOfRange { qubit, num_qubits } => {
                write!(
                    f,
                    "qubit {qubit} out of range for {num_qubits}-qubit register"
                )
            }
            LinalgError::DuplicateQubit { qubit } => write!(f, "duplicate target qubit {qubit}"),
            LinalgError::MatrixSizeMismatch { dim, qubits } => {
                write!(
                    f,
                    "{}x{} matrix does not act on {} qubit(s)",
                    dim.0, dim.1, qubits
                )
            }
            LinalgError::SvdNoConvergence { sweeps } => {
                write!(f, "SVD did not converge within {sweeps} Jacobi sweeps")
            }
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C_ONE;
        }
        m
    }

    /// Build from a row-major slice of entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        CMatrix {
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    /// Build from row-major `(re, im)` pairs; handy for gate tables.
    pub fn from_reals(rows: usize, cols: usize, entries: &[(f64, f64)]) -> Self {
        let data = entries
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect::<Vec<_>>();
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        CMatrix { rows, cols, data }
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Standard matrix product.
    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimMismatch {
                lhs: (self.rows, self.cols),
                rhs: (rhs.rows, rhs.cols),
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C_ZERO {
                    continue;
                }
                let lhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(lhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` is the left (higher-order) factor:
    /// `(A⊗B)[(i*rB+k),(j*cB+m)] = A[i,j]*B[k,m]`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C_ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for m in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + m)] = a * rhs[(k, m)];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> CMatrix {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= factor;
        }
        out
    }

    /// `self += factor * rhs`, shapes must match.
    pub fn add_scaled(&mut self, factor: Complex64, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += factor * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.dagger().matmul(self) {
            Ok(p) => p.max_abs_diff(&CMatrix::identity(self.rows)) <= tol,
            Err(_) => false,
        }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c && self[(r, c)].norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimMismatch {
                lhs: (self.rows, self.cols),
                rhs: (v.len(), 1),
            });
        }
        let mut out = vec![C_ZERO; self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *slot = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
        }
        Ok(out)
    }
}

/// Free-function aliases matching the kernel vocabulary.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    a.matmul(b)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Amplitude vector of an `n`-qubit register. Qubit 0 is the least
/// significant bit of a basis-state index. Half-register states inside a
/// decomposed simulation may be unnormalized.
#[derive(Clone, PartialEq, Debug)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0...0⟩ on `n` qubits.
    pub fn zero_state(n: usize) -> Self {
        let mut amps = vec![C_ZERO; 1usize << n];
        amps[0] = C_ONE;
        Statevector { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1usize << n);
        Statevector { n, amps }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reset to |0...0⟩ without reallocating.
    pub fn reset(&mut self) {
        self.amps.fill(C_ZERO);
        self.amps[0] = C_ONE;
    }

    pub fn copy_from(&mut self, other: &Statevector) {
        debug_assert_eq!(self.n, other.n);
        self.amps.copy_from_slice(&other.amps);
    }

    /// Apply a `2^k` matrix to the targets listed most-significant first
    /// (`qubits[0]` addresses the highest-order tensor factor of `mat`).
    ///
    /// Strided gather/scatter over `2^k`-amplitude groups; the `2^n`
    /// embedding is never materialized and `mat` need not be unitary.
    pub fn apply_matrix(&mut self, mat: &CMatrix, qubits: &[usize]) -> Result<(), LinalgError> {
        let k = qubits.len();
        if mat.rows() != (1 << k) || mat.cols() != (1 << k) {
            return Err(LinalgError::MatrixSizeMismatch {
                dim: (mat.rows(), mat.cols()),
                qubits: k,
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n {
                return Err(LinalgError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.n,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(LinalgError::DuplicateQubit { qubit: q });
            }
        }
        // Kernel wants bit j of the matrix index to address qubits_lsb[j].
        let qubits_lsb: Vec<usize> = qubits.iter().rev().copied().collect();
        apply_kernel(&mut self.amps, mat, &qubits_lsb);
        Ok(())
    }
}

/// Apply `mat` to `amps` with `qubits_lsb[j]` carrying bit `j` of the
/// matrix index. Callers guarantee validated, distinct, in-range targets.
pub(crate) fn apply_kernel(amps: &mut [Complex64], mat: &CMatrix, qubits_lsb: &[usize]) {
    let k = qubits_lsb.len();
    let dim = 1usize << k;
    debug_assert_eq!(mat.rows(), dim);

    let mask: usize = qubits_lsb.iter().map(|&q| 1usize << q).sum();
    let mut offsets = vec![0usize; dim];
    for (t, off) in offsets.iter_mut().enumerate() {
        let mut o = 0;
        for (j, &q) in qubits_lsb.iter().enumerate() {
            if (t >> j) & 1 == 1 {
                o |= 1usize << q;
            }
        }
        *off = o;
    }

    let mut gathered = vec![C_ZERO; dim];
    let mdata = mat.data();
    // Enumerate every base index whose target bits are all zero.
    let mut base = 0usize;
    loop {
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &mdata[r * dim..(r + 1) * dim];
            let mut acc = C_ZERO;
            for (m, &g) in row.iter().zip(&gathered) {
                acc += m * g;
            }
            amps[base | off] = acc;
        }
        base = (base | mask).wrapping_add(1) & !mask;
        if base == 0 || base >= amps.len() {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cnot() -> CMatrix {
        CMatrix::from_reals(
            4,
            4,
            &[
                (1., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (1., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (1., 0.),
                (0., 0.),
                (0., 0.),
                (1., 0.),
                (0., 0.),
            ],
        )
    }

    fn hadamard() -> CMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_reals(2, 2, &[(s, 0.), (s, 0.), (s, 0.), (-s, 0.)])
    }

    // Independent triple-loop product used as the matmul oracle.
    fn reference_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut s = C_ZERO;
                for k in 0..a.cols() {
                    s += a[(i, k)] * b[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    #[test]
    fn matmul_identity() {
        let a = CMatrix::from_reals(2, 2, &[(1., 2.), (3., -1.), (0., 0.5), (2., 2.)]);
        let prod = CMatrix::identity(2).matmul(&a).unwrap();
        assert_eq!(prod, a);
    }

    #[test]
    fn matmul_cnot_involution() {
        let c = cnot();
        let prod = c.matmul(&c).unwrap();
        assert!(prod.max_abs_diff(&CMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn matmul_matches_reference_oracle() {
        let hi = hadamard().kron(&CMatrix::identity(2));
        let got = hi.matmul(&cnot()).unwrap();
        let want = reference_product(&hi, &cnot());
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn matmul_dim_mismatch() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(LinalgError::DimMismatch { .. })));
    }

    #[test]
    fn kron_basis_vectors() {
        // [1,0]^T ⊗ [1,0]^T = [1,0,0,0]^T
        let ket0 = CMatrix::from_reals(2, 1, &[(1., 0.), (0., 0.)]);
        let k = ket0.kron(&ket0);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 0)], C_ONE);
        for i in 1..4 {
            assert_eq!(k[(i, 0)], C_ZERO);
        }
    }

    #[test]
    fn kron_with_scalar_identity() {
        let a = CMatrix::from_reals(2, 2, &[(1., 1.), (2., 0.), (0., -3.), (4., 0.)]);
        assert_eq!(a.kron(&CMatrix::identity(1)), a);
        assert_eq!(CMatrix::identity(1).kron(&a), a);
    }

    #[test]
    fn kron_mixed_product_identity() {
        // (A⊗B)(u⊗v) = (Au)⊗(Bv) on fixed pseudo-random 2x2 inputs.
        let a = CMatrix::from_reals(2, 2, &[(0.3, -1.2), (0.7, 0.1), (1.5, 0.4), (-0.2, 0.9)]);
        let b = CMatrix::from_reals(2, 2, &[(-0.6, 0.2), (1.1, -0.8), (0.05, 0.3), (0.9, 1.4)]);
        let u = [c(0.4, 0.1), c(-1.0, 0.7)];
        let v = [c(0.2, -0.5), c(0.8, 0.3)];
        let uv: Vec<Complex64> = (0..4).map(|i| u[i / 2] * v[i % 2]).collect();
        let lhs = a.kron(&b).matvec(&uv).unwrap();
        let au = a.matvec(&u).unwrap();
        let bv = b.matvec(&v).unwrap();
        let rhs: Vec<Complex64> = (0..4).map(|i| au[i / 2] * bv[i % 2]).collect();
        for (x, y) in lhs.iter().zip(&rhs) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn apply_bell_preparation() {
        // H on qubit 0, then CNOT(control 0 -> target 1): (1/√2)[1,0,0,1].
        let mut psi = Statevector::zero_state(2);
        psi.apply_matrix(&hadamard(), &[0]).unwrap();
        psi.apply_matrix(&cnot(), &[0, 1]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let want = [c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)];
        for (a, b) in psi.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_identity_is_noop() {
        let mut psi = Statevector::zero_state(3);
        psi.apply_matrix(&hadamard(), &[1]).unwrap();
        let before = psi.clone();
        psi.apply_matrix(&CMatrix::identity(4), &[2, 0]).unwrap();
        assert!(before
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let mut psi = Statevector::zero_state(2);
        assert!(matches!(
            psi.apply_matrix(&hadamard(), &[5]),
            Err(LinalgError::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            psi.apply_matrix(&CMatrix::identity(4), &[1, 1]),
            Err(LinalgError::DuplicateQubit { .. })
        ));
        assert!(matches!(
            psi.apply_matrix(&CMatrix::identity(4), &[1]),
            Err(LinalgError::MatrixSizeMismatch { .. })
        ));
    }
}
