//! Operator Schmidt decomposition across a qubit cut.
//!
//! An operator A over n = n_low + n_high qubits is reshaped so that its row
//! index carries the low-side (row, column) bit pairs and its column index
//! the high-side pairs; an SVD of the reshaped matrix then yields
//! `A = Σ σ_m X_m ⊗ Y_m` with X_m acting on the high partition and Y_m on
//! the low partition. The number of terms is the Schmidt rank, bounded by
//! `min(4^n_low, 4^n_high)` no matter how many gates were merged into A —
//! which is why decomposing a whole block jointly beats decomposing its
//! gates one by one.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use crate::circuit::{Gate, Qubit};
use crate::linalg::{self, svd, CMatrix, LinalgError, C_ONE, C_ZERO};

/// Relative singular-value cutoff: terms with `σ_m <= tol * σ_0` are exact
/// zeros up to double precision and are dropped.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SchmidtError {
    /// Operator is not square over a whole number of qubits.
    NotQubitOperator {
        rows: usize,
        cols: usize,
    },
    /// Split must leave at least one qubit on each side.
    BadSplit {
        n: usize,
        n_low: usize,
    },
    /// Block support exceeds the configured qubit cap; merging and
    /// decomposing it would cost more than it saves.
    SupportCapExceeded {
        support: usize,
        cap: usize,
    },
    /// A gate targets a qubit outside the block support.
    GateOutsideSupport {
        qubit: Qubit,
    },
    /// Support list must be strictly ascending.
    UnsortedSupport,
    UnsupportedCascade,
    Linalg(LinalgError),
}

impl fmt::Display for SchmidtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchmidtError::NotQubitOperator { rows, cols } => {
                write!(
                    f,
                    "{rows}x{cols} matrix is not an operator over whole qubits"
                )
            }
            SchmidtError::BadSplit { n, n_low } => {
                write!(f, "cannot split {n} qubit(s) with {n_low} on the low side")
            }
            SchmidtError::SupportCapExceeded { support, cap } => {
                write!(f, "block support of {support} qubits exceeds cap {cap}")
            }
            SchmidtError::GateOutsideSupport { qubit } => {
                write!(f, "gate qubit {qubit} lies outside the block support")
            }
            SchmidtError::UnsortedSupport => write!(f, "support list must be strictly ascending"),
            SchmidtError::UnsupportedCascade => write!(f, "unsupported cascade shape"),
            SchmidtError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinalgError> for SchmidtError {
    fn from(e: LinalgError) -> Self {
        SchmidtError::Linalg(e)
    }
}

/// One term `σ · X ⊗ Y` of a decomposition; both factors have unit
/// Frobenius norm, the weight stays in `sigma`.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    pub sigma: f64,
    /// High-side factor, `2^n_high` square.
    pub x: CMatrix,
    /// Low-side factor, `2^n_low` square.
    pub y: CMatrix,
}

/// Terms in descending σ order plus the split they were taken across.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    terms: Vec<SchmidtTerm>,
    n_low: usize,
    n_high: usize,
}

impl SchmidtDecomposition {
    pub fn new(terms: Vec<SchmidtTerm>, n_low: usize, n_high: usize) -> Self {
        SchmidtDecomposition {
            terms,
            n_low,
            n_high,
        }
    }

    #[inline]
    pub fn terms(&self) -> &[SchmidtTerm] {
        &self.terms
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn n_low(&self) -> usize {
        self.n_low
    }

    #[inline]
    pub fn n_high(&self) -> usize {
        self.n_high
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.sigma).collect()
    }

    /// Σ σ_m X_m ⊗ Y_m; equals the source operator when nothing was
    /// truncated.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = 1usize << (self.n_low + self.n_high);
        let mut acc = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let prod = term.x.kron(&term.y);
            acc.add_scaled(Complex64::new(term.sigma, 0.0), &prod);
        }
        acc
    }
}

/// `min(4^n_low, 4^n_high)`: the dimension bound on the Schmidt rank of any
/// operator across this split.
pub fn rank_bound(n_low: usize, n_high: usize) -> u128 {
    let e = 2 * n_low.min(n_high) as u32;
    1u128 << e
}

fn qubit_count_of(a: &CMatrix) -> Result<usize, SchmidtError> {
    let err = SchmidtError::NotQubitOperator {
        rows: a.rows(),
        cols: a.cols(),
    };
    if !a.is_square() || a.rows() == 0 || !a.rows().is_power_of_two() {
        return Err(err);
    }
    Ok(a.rows().trailing_zeros() as usize)
}

/// Permute entries of a `2^n` square operator into the `4^n_low × 4^n_high`
/// matrix whose row index is the low-side (row, col) bit pair and whose
/// column index is the high-side pair. No arithmetic is performed.
pub fn reshape_for_cut(a: &CMatrix, n_low: usize) -> Result<CMatrix, SchmidtError> {
    let n = qubit_count_of(a)?;
    if n_low == 0 || n_low >= n {
        return Err(SchmidtError::BadSplit { n, n_low });
    }
    let n_high = n - n_low;
    let dim_low = 1usize << n_low;
    let dim_high = 1usize << n_high;
    let mut out = CMatrix::zeros(dim_low * dim_low, dim_high * dim_high);
    for i_high in 0..dim_high {
        for i_low in 0..dim_low {
            for j_high in 0..dim_high {
                for j_low in 0..dim_low {
                    out[(i_low * dim_low + j_low, i_high * dim_high + j_high)] =
                        a[(i_high * dim_low + i_low, j_high * dim_low + j_low)];
                }
            }
        }
    }
    Ok(out)
}

/// Exact inverse of `reshape_for_cut`.
pub fn inverse_reshape(reshaped: &CMatrix, n_low: usize, n_high: usize) -> CMatrix {
    let dim_low = 1usize << n_low;
    let dim_high = 1usize << n_high;
    debug_assert_eq!(reshaped.rows(), dim_low * dim_low);
    debug_assert_eq!(reshaped.cols(), dim_high * dim_high);
    let dim = dim_low * dim_high;
    let mut out = CMatrix::zeros(dim, dim);
    for i_high in 0..dim_high {
        for i_low in 0..dim_low {
            for j_high in 0..dim_high {
                for j_low in 0..dim_low {
                    out[(i_high * dim_low + i_low, j_high * dim_low + j_low)] =
                        reshaped[(i_low * dim_low + j_low, i_high * dim_high + j_high)];
                }
            }
        }
    }
    out
}

/// Schmidt-decompose `a` across `n_low` low qubits: reshape, SVD, then fold
/// rows of V† into high-side factors and columns of U into low-side
/// factors. Terms with `σ_m <= tol · σ_0` are dropped.
pub fn schmidt_decompose(
    a: &CMatrix,
    n_low: usize,
    tol: f64,
) -> Result<SchmidtDecomposition, SchmidtError> {
    let n = qubit_count_of(a)?;
    if n_low == 0 || n_low >= n {
        return Err(SchmidtError::BadSplit { n, n_low });
    }
    let n_high = n - n_low;
    let reshaped = reshape_for_cut(a, n_low)?;
    let decomp = svd(&reshaped)?;
    let dim_low = 1usize << n_low;
    let dim_high = 1usize << n_high;

    let sigma_max = decomp.sigma.first().copied().unwrap_or(0.0);
    let mut terms = Vec::new();
    for (m, &sigma) in decomp.sigma.iter().enumerate() {
        if sigma <= tol * sigma_max || sigma == 0.0 {
            break;
        }
        let mut x = CMatrix::zeros(dim_high, dim_high);
        for i in 0..dim_high {
            for j in 0..dim_high {
                x[(i, j)] = decomp.vt[(m, i * dim_high + j)];
            }
        }
        let mut y = CMatrix::zeros(dim_low, dim_low);
        for i in 0..dim_low {
            for j in 0..dim_low {
                y[(i, j)] = decomp.u[(i * dim_low + j, m)];
            }
        }
        terms.push(SchmidtTerm { sigma, x, y });
    }
    Ok(SchmidtDecomposition {
        terms,
        n_low,
        n_high,
    })
}

/// Map gate targets onto block-local kernel positions (least significant
/// first): bit `j` of the block index addresses `support[j]`.
pub(crate) fn kernel_positions(
    gate_qubits: &[Qubit],
    support: &[Qubit],
) -> Result<Vec<usize>, SchmidtError> {
    gate_qubits
        .iter()
        .rev()
        .map(|q| {
            support
                .iter()
                .position(|s| s == q)
                .ok_or(SchmidtError::GateOutsideSupport { qubit: *q })
        })
        .collect()
}

fn check_support(support: &[Qubit]) -> Result<(), SchmidtError> {
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SchmidtError::UnsortedSupport);
    }
    Ok(())
}

/// Merge a gate sequence into one dense matrix over the ascending support
/// list, so that applying the block equals applying the gates in order
/// (the last gate is the leftmost matrix factor).
pub fn assemble_block_matrix(
    gates: &[&Gate],
    support: &[Qubit],
    max_qubits: usize,
) -> Result<CMatrix, SchmidtError> {
    check_support(support)?;
    let k = support.len();
    if k > max_qubits {
        return Err(SchmidtError::SupportCapExceeded {
            support: k,
            cap: max_qubits,
        });
    }
    let dim = 1usize << k;
    // Column-major identity; every column evolves like a statevector.
    let mut cols = vec![C_ZERO; dim * dim];
    for j in 0..dim {
        cols[j * dim + j] = C_ONE;
    }
    for gate in gates {
        let positions = kernel_positions(gate.qubits(), support)?;
        for j in 0..dim {
            linalg::apply_kernel(&mut cols[j * dim..(j + 1) * dim], gate.matrix(), &positions);
        }
    }
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out[(r, c)] = cols[c * dim + r];
        }
    }
    Ok(out)
}

/// Which side of the cut holds the shared cascade qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSide {
    Low,
    High,
}

/// Two-qubit gate families with closed-form cascade decompositions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CascadeKind {
    Cnot,
    Cz,
    Rzz(f64),
}

/// Closed-form decomposition of a fan of identical two-qubit gates sharing
/// one anchor qubit across the cut: at most two terms regardless of fan
/// size. Factors are normalized to unit Frobenius norm with the weight in
/// σ, matching `schmidt_decompose` of the assembled block up to term order
/// and per-term phase.
pub fn analytic_cascade_decomposition(
    kind: CascadeKind,
    fan: usize,
    anchor: AnchorSide,
) -> Result<SchmidtDecomposition, SchmidtError> {
    if fan == 0 {
        return Err(SchmidtError::UnsupportedCascade);
    }
    let p0 = CMatrix::from_diag(&[C_ONE, C_ZERO]);
    let p1 = CMatrix::from_diag(&[C_ZERO, C_ONE]);
    let ident = CMatrix::identity(2);
    let z = CMatrix::from_diag(&[C_ONE, -C_ONE]);
    let x = CMatrix::from_rows(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO]);
    let half = Complex64::new(0.5, 0.0);
    let two = Complex64::new(2.0, 0.0);

    // Raw (anchor factor, fan-side factor) pairs whose sum is the cascade;
    // both lists are orthogonal, so normalizing gives true Schmidt terms.
    let raw: Vec<(CMatrix, CMatrix)> = match kind {
        CascadeKind::Cnot => vec![(p0, kron_power(&ident, fan)), (p1, kron_power(&x, fan))],
        CascadeKind::Cz => vec![(p0, kron_power(&ident, fan)), (p1, kron_power(&z, fan))],
        CascadeKind::Rzz(theta) => {
            // Product over targets of exp(-i θ/2 Z_anchor Z_target), split in
            // the {I, Z} anchor basis; the fan-side factors are diagonal with
            // entries cos/-i·sin of θ/2·(fan - 2·popcount(index)).
            let dim = 1usize << fan;
            let mut sym = vec![C_ZERO; dim];
            let mut asym = vec![C_ZERO; dim];
            for (t, (s, a)) in sym.iter_mut().zip(asym.iter_mut()).enumerate() {
                let weight = theta / 2.0 * (fan as f64 - 2.0 * t.count_ones() as f64);
                *s = Complex64::new(weight.cos(), 0.0);
                *a = Complex64::new(0.0, -weight.sin());
            }
            vec![
                (ident.scaled(half), CMatrix::from_diag(&sym).scaled(two)),
                (z.scaled(half), CMatrix::from_diag(&asym).scaled(two)),
            ]
        }
    };

    let mut terms: Vec<SchmidtTerm> = Vec::new();
    for (anchor_mat, fan_mat) in raw {
        let sigma = anchor_mat.frobenius_norm() * fan_mat.frobenius_norm();
        if sigma == 0.0 {
            continue;
        }
        let a_norm = anchor_mat.scaled(Complex64::new(1.0 / anchor_mat.frobenius_norm(), 0.0));
        let f_norm = fan_mat.scaled(Complex64::new(1.0 / fan_mat.frobenius_norm(), 0.0));
        let (x_fac, y_fac) = match anchor {
            AnchorSide::High => (a_norm, f_norm),
            AnchorSide::Low => (f_norm, a_norm),
        };
        terms.push(SchmidtTerm {
            sigma,
            x: x_fac,
            y: y_fac,
        });
    }
    let sigma_max = terms.iter().map(|t| t.sigma).fold(0.0, f64::max);
    terms.retain(|t| t.sigma > DEFAULT_TRUNCATION_TOL * sigma_max);
    terms.sort_by(|a, b| b.sigma.partial_cmp(&a.sigma).unwrap());
    let (n_low, n_high) = match anchor {
        AnchorSide::High => (fan, 1),
        AnchorSide::Low => (1, fan),
    };
    Ok(SchmidtDecomposition {
        terms,
        n_low,
        n_high,
    })
}

fn kron_power(m: &CMatrix, k: usize) -> CMatrix {
    let mut acc = m.clone();
    for _ in 1..k {
        acc = acc.kron(m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn cnot_high_control() -> CMatrix {
        // Control on the high qubit: the standard P0⊗I + P1⊗X layout.
        Gate::cnot(1, 0).matrix().clone()
    }

    #[test]
    fn reshape_round_trip_is_identity() {
        let id4 = CMatrix::identity(4);
        let reshaped = reshape_for_cut(&id4, 1).unwrap();
        assert_eq!(inverse_reshape(&reshaped, 1, 1), id4);
    }

    #[test]
    fn reshape_of_kron_is_outer_product() {
        // reshape(P⊗Q, 1) = vec(Q)·vec(P)^T with row-major vectorization.
        let p = CMatrix::from_reals(2, 2, &[(0.3, 1.0), (-0.7, 0.2), (0.9, -0.4), (1.1, 0.0)]);
        let q = CMatrix::from_reals(2, 2, &[(0.5, -0.1), (0.0, 0.8), (-1.2, 0.3), (0.4, 0.6)]);
        let reshaped = reshape_for_cut(&p.kron(&q), 1).unwrap();
        for rb in 0..4 {
            for ra in 0..4 {
                let want = q[(rb / 2, rb % 2)] * p[(ra / 2, ra % 2)];
                assert!((reshaped[(rb, ra)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn reshape_rejects_non_operators() {
        let m = CMatrix::zeros(3, 3);
        assert!(matches!(
            reshape_for_cut(&m, 1),
            Err(SchmidtError::NotQubitOperator { .. })
        ));
        assert!(matches!(
            reshape_for_cut(&CMatrix::identity(4), 2),
            Err(SchmidtError::BadSplit { .. })
        ));
    }

    #[test]
    fn cnot_rank_two_and_projector_span() {
        let cnot = cnot_high_control();
        let d = schmidt_decompose(&cnot, 1, DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(d.rank(), 2);
        assert!(d.reconstruct().max_abs_diff(&cnot) < 1e-10);
        // High-side factors lie in span{P0, P1}: diagonal and unit-norm.
        for t in d.terms() {
            assert!(t.x.is_diagonal(1e-10));
            assert!((t.x.frobenius_norm() - 1.0).abs() < 1e-10);
            assert!((t.y.frobenius_norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn swap_rank_four() {
        let swap = Gate::swap(0, 1).matrix().clone();
        let d = schmidt_decompose(&swap, 1, DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(d.rank(), 4);
        assert!(d.reconstruct().max_abs_diff(&swap) < 1e-10);
    }

    #[test]
    fn kron_product_has_rank_one() {
        let p = Gate::h(0).matrix().clone();
        let q = Gate::rx(1.234, 0).matrix().clone();
        let d = schmidt_decompose(&p.kron(&q), 1, DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn rzz_rank_and_singular_values() {
        let theta: f64 = 0.7;
        let g = Gate::rzz(theta, 0, 1);
        let d = schmidt_decompose(g.matrix(), 1, DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(d.rank(), 2);
        let sv = d.singular_values();
        let mut want = [
            2.0 * (theta / 2.0).cos().abs(),
            2.0 * (theta / 2.0).sin().abs(),
        ];
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((sv[0] - want[0]).abs() < 1e-10);
        assert!((sv[1] - want[1]).abs() < 1e-10);
    }

    #[test]
    fn rzz_zero_angle_rank_one() {
        let g = Gate::rzz(0.0, 0, 1);
        let d = schmidt_decompose(g.matrix(), 1, DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn block_of_single_gate_is_that_gate() {
        // Control on the block's high bit: layouts coincide exactly.
        let g = Gate::cnot(1, 0);
        let block = assemble_block_matrix(&[&g], &[0, 1], 12).unwrap();
        assert!(block.max_abs_diff(g.matrix()) < 1e-15);

        // Control on the block's low bit: same gate, permuted layout.
        let g = Gate::cnot(0, 1);
        let block = assemble_block_matrix(&[&g], &[0, 1], 12).unwrap();
        let p0 = CMatrix::from_diag(&[C_ONE, C_ZERO]);
        let p1 = CMatrix::from_diag(&[C_ZERO, C_ONE]);
        let x = Gate::x(0).matrix().clone();
        let mut want = CMatrix::identity(2).kron(&p0);
        want.add_scaled(C_ONE, &x.kron(&p1));
        assert!(block.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn cnot_cascade_block_matches_projector_form() {
        // Control on qubit 0, targets 1..3. Block bit 0 is the control, so
        // the fan sits in the high factor: I⊗I⊗I⊗P0 + X⊗X⊗X⊗P1.
        let gates = [Gate::cnot(0, 1), Gate::cnot(0, 2), Gate::cnot(0, 3)];
        let refs: Vec<&Gate> = gates.iter().collect();
        let block = assemble_block_matrix(&refs, &[0, 1, 2, 3], 12).unwrap();

        let p0 = CMatrix::from_diag(&[C_ONE, C_ZERO]);
        let p1 = CMatrix::from_diag(&[C_ZERO, C_ONE]);
        let x = Gate::x(0).matrix().clone();
        let ident = CMatrix::identity(2);
        let mut want = kron_power(&ident, 3).kron(&p0);
        want.add_scaled(C_ONE, &kron_power(&x, 3).kron(&p1));
        assert!(block.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn cnot_cascade_with_high_control_is_literal_projector_sum() {
        // Control on the top qubit: the block is literally
        // P0⊗I⊗I⊗I + P1⊗X⊗X⊗X.
        let gates = [Gate::cnot(3, 0), Gate::cnot(3, 1), Gate::cnot(3, 2)];
        let refs: Vec<&Gate> = gates.iter().collect();
        let block = assemble_block_matrix(&refs, &[0, 1, 2, 3], 12).unwrap();
        let p0 = CMatrix::from_diag(&[C_ONE, C_ZERO]);
        let p1 = CMatrix::from_diag(&[C_ZERO, C_ONE]);
        let x = CMatrix::from_rows(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO]);
        let ident = CMatrix::identity(2);
        let mut want = p0.kron(&kron_power(&ident, 3));
        want.add_scaled(C_ONE, &p1.kron(&kron_power(&x, 3)));
        assert!(block.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn disjoint_gates_assemble_order_independent() {
        let a = Gate::rx(0.9, 0);
        let b = Gate::rz(1.7, 2);
        let ab = assemble_block_matrix(&[&a, &b], &[0, 1, 2], 12).unwrap();
        let ba = assemble_block_matrix(&[&b, &a], &[0, 1, 2], 12).unwrap();
        assert!(ab.max_abs_diff(&ba) < 1e-14);
    }

    #[test]
    fn block_cap_is_enforced() {
        let g = Gate::cnot(0, 1);
        assert!(matches!(
            assemble_block_matrix(&[&g], &[0, 1, 2], 2),
            Err(SchmidtError::SupportCapExceeded { .. })
        ));
    }

    #[test]
    fn analytic_cnot_cascade_rank_two() {
        for fan in 1..=4 {
            let d =
                analytic_cascade_decomposition(CascadeKind::Cnot, fan, AnchorSide::Low).unwrap();
            assert_eq!(d.rank(), 2, "fan {fan}");
            let want = (2f64).powi(fan as i32).sqrt();
            for t in d.terms() {
                assert!((t.sigma - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn analytic_rzz_zero_angle_rank_one() {
        let d = analytic_cascade_decomposition(CascadeKind::Rzz(0.0), 2, AnchorSide::Low).unwrap();
        assert_eq!(d.rank(), 1);
    }

    // SVD factors are unique only up to phase and degenerate rotation, so
    // factor sets are compared by span: orthonormalize one vectorized set
    // and require zero projection residual for the other.
    fn assert_same_span(reference: &[&CMatrix], other: &[&CMatrix]) {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for m in reference {
            let mut w = m.data().to_vec();
            for b in &basis {
                let dot: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= dot * bi;
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for z in &mut w {
                    *z /= norm;
                }
                basis.push(w);
            }
        }
        for m in other {
            let mut residual = m.data().to_vec();
            for b in &basis {
                let dot: Complex64 = b
                    .iter()
                    .zip(residual.iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                for (ri, bi) in residual.iter_mut().zip(b) {
                    *ri -= dot * bi;
                }
            }
            let left = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(left < 1e-10, "factor outside span, residual {left}");
        }
    }

    #[test]
    fn analytic_matches_numeric_on_cascades() {
        // Anchor = qubit 0 (low side of a 1|fan split), targets above it.
        type Builder = fn(f64, usize) -> Gate;
        let cases: [(CascadeKind, Builder); 3] = [
            (CascadeKind::Cnot, |_t, q| Gate::cnot(0, q + 1)),
            (CascadeKind::Cz, |_t, q| Gate::cz(0, q + 1)),
            (CascadeKind::Rzz(0.77), |t, q| Gate::rzz(t, 0, q + 1)),
        ];
        for (kind, builder) in cases {
            let theta = if let CascadeKind::Rzz(t) = kind {
                t
            } else {
                0.0
            };
            for fan in 1..=3usize {
                let gates: Vec<Gate> = (0..fan).map(|q| builder(theta, q)).collect();
                let refs: Vec<&Gate> = gates.iter().collect();
                let support: Vec<usize> = (0..=fan).collect();
                let block = assemble_block_matrix(&refs, &support, 12).unwrap();
                let numeric = schmidt_decompose(&block, 1, DEFAULT_TRUNCATION_TOL).unwrap();
                let analytic = analytic_cascade_decomposition(kind, fan, AnchorSide::Low).unwrap();
                assert_eq!(numeric.rank(), analytic.rank(), "{kind:?} fan {fan}");
                let sv_n = numeric.singular_values();
                let sv_a = analytic.singular_values();
                for (a, b) in sv_n.iter().zip(&sv_a) {
                    assert!(
                        (a - b).abs() < 1e-10,
                        "{kind:?} fan {fan}: {sv_n:?} vs {sv_a:?}"
                    );
                }
                assert!(analytic.reconstruct().max_abs_diff(&block) < 1e-10);
                let xs_n: Vec<&CMatrix> = numeric.terms().iter().map(|t| &t.x).collect();
                let xs_a: Vec<&CMatrix> = analytic.terms().iter().map(|t| &t.x).collect();
                assert_same_span(&xs_a, &xs_n);
                assert_same_span(&xs_n, &xs_a);
            }
        }
    }

    #[test]
    fn rank_bound_formula() {
        assert_eq!(rank_bound(1, 3), 4);
        assert_eq!(rank_bound(2, 2), 16);
        assert_eq!(rank_bound(5, 2), 16);
    }
}
