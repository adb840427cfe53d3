//! Thin singular value decomposition via one-sided Jacobi rotations.
//!
//! Columns of the working matrix are orthogonalized pairwise; at convergence
//! the column norms are the singular values, the normalized columns form U,
//! and the accumulated rotations form V. Matrices wider than tall are
//! handled by decomposing the conjugate transpose.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use super::{CMatrix, LinalgError, C_ZERO};

const MAX_SWEEPS: usize = 64;
const CONV_TOL: f64 = 1e-14;

/// Result of `svd`: `a = u * diag(sigma) * vt` with `sigma` descending and
/// `u`, `vt.dagger()` having orthonormal columns.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub vt: CMatrix,
}

/// Thin SVD of a finite dense matrix.
///
/// Fails with `SvdNoConvergence` if the Jacobi sweeps do not reduce the
/// off-diagonal mass below tolerance; garbage is never returned silently.
pub fn svd(a: &CMatrix) -> Result<Svd, LinalgError> {
    if a.rows() < a.cols() {
        let t = svd(&a.dagger())?;
        return Ok(Svd {
            u: t.vt.dagger(),
            sigma: t.sigma,
            vt: t.u.dagger(),
        });
    }

    let m = a.rows();
    let n = a.cols();

    // Column-major working copies of A and V = I.
    let mut w: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![C_ZERO; n];
            col[j] = super::C_ONE;
            col
        })
        .collect();

    // Columns below ε·‖A‖_F carry no significant singular mass. Rotating
    // against them stalls convergence (their relative criterion can never
    // be met), so they are frozen here and zeroed during extraction.
    let scale_sqr: f64 = w.iter().flatten().map(|z| z.norm_sqr()).sum();
    let negligible_sqr = scale_sqr * (f64::EPSILON * f64::EPSILON);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        converged = true;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta, gamma) = column_gram(&w[p], &w[q]);
                if alpha <= negligible_sqr || beta <= negligible_sqr {
                    continue;
                }
                let gnorm_sqr = gamma.norm_sqr();
                if gnorm_sqr <= CONV_TOL * CONV_TOL * alpha * beta {
                    continue;
                }
                converged = false;
                let gnorm = gnorm_sqr.sqrt();
                let phase = gamma / gnorm;
                let zeta = (beta - alpha) / (2.0 * gnorm);
                let t = {
                    let sign = if zeta < 0.0 { -1.0 } else { 1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
    }
    if !converged {
        return Err(LinalgError::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    // Sort singular values descending, carrying the columns along.
    let mut sigma: Vec<f64> = w
        .iter()
        .map(|col| {
            let norm_sqr: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            if norm_sqr <= negligible_sqr {
                0.0
            } else {
                norm_sqr.sqrt()
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut u = CMatrix::zeros(m, n);
    let mut vt = CMatrix::zeros(n, n);
    let sorted_sigma: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    for (dst, &src) in order.iter().enumerate() {
        let s = sigma[src];
        if s > 0.0 {
            for i in 0..m {
                u[(i, dst)] = w[src][i] / s;
            }
        }
        for i in 0..n {
            vt[(dst, i)] = v[src][i].conj();
        }
    }
    sigma = sorted_sigma;

    complete_null_columns(&mut u, &sigma);
    Ok(Svd { u, sigma, vt })
}

fn column_gram(p: &[Complex64], q: &[Complex64]) -> (f64, f64, Complex64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = C_ZERO;
    for (&a, &b) in p.iter().zip(q) {
        alpha += a.norm_sqr();
        beta += b.norm_sqr();
        gamma += a.conj() * b;
    }
    (alpha, beta, gamma)
}

/// Right-multiply columns (p, q) by the unitary
/// [[c, s*phase], [-s*conj(phase), c]].
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    let phase_conj = phase.conj();
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let wa = *a;
        let wb = *b;
        *a = wa * c - wb * (s * phase_conj);
        *b = wa * (s * phase) + wb * c;
    }
}

/// Exact-zero singular values leave U columns undefined; fill them with an
/// orthonormal completion so the column-orthonormality contract holds even
/// for rank-deficient inputs. Singular values are sorted descending, so
/// every column before a null one is already valid.
fn complete_null_columns(u: &mut CMatrix, sigma: &[f64]) {
    let m = u.rows();
    for j in 0..sigma.len() {
        if sigma[j] > 0.0 {
            continue;
        }
        'basis: for k in 0..m {
            let mut cand = vec![C_ZERO; m];
            cand[k] = super::C_ONE;
            for other in 0..j {
                let dot: Complex64 = (0..m).map(|i| u[(i, other)].conj() * cand[i]).sum();
                for (i, c) in cand.iter_mut().enumerate() {
                    *c -= dot * u[(i, other)];
                }
            }
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for (i, c) in cand.into_iter().enumerate() {
                    u[(i, j)] = c / norm;
                }
                break 'basis;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C_ONE;

    fn reconstruct(s: &Svd) -> CMatrix {
        let mut us = s.u.clone();
        for j in 0..s.sigma.len() {
            for i in 0..us.rows() {
                us[(i, j)] *= s.sigma[j];
            }
        }
        us.matmul(&s.vt).unwrap()
    }

    fn assert_orthonormal_cols(m: &CMatrix, tol: f64) {
        let g = m.dagger().matmul(m).unwrap();
        assert!(
            g.max_abs_diff(&CMatrix::identity(m.cols())) < tol,
            "columns not orthonormal: deviation {}",
            g.max_abs_diff(&CMatrix::identity(m.cols()))
        );
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&CMatrix::identity(2)).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-14);
        assert!((s.sigma[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_diagonal() {
        let d = CMatrix::from_diag(&[Complex64::new(3.0, 0.0), C_ZERO]);
        let s = svd(&d).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-14);
        assert!(s.sigma[1].abs() < 1e-14);
        assert_orthonormal_cols(&s.u, 1e-12);
        assert!(reconstruct(&s).max_abs_diff(&d) < 1e-12);
    }

    #[test]
    fn random_square_reconstruction() {
        // Deterministic pseudo-random 8x8 from a simple LCG.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut a = CMatrix::zeros(8, 8);
        for r in 0..8 {
            for c in 0..8 {
                a[(r, c)] = Complex64::new(next(), next());
            }
        }
        let s = svd(&a).unwrap();
        let resid = reconstruct(&s).max_abs_diff(&a);
        assert!(resid < 1e-12 * a.frobenius_norm(), "residual {resid}");
        assert_orthonormal_cols(&s.u, 1e-10);
        assert_orthonormal_cols(&s.vt.dagger(), 1e-10);
        for w in s.sigma.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn wide_matrix_via_transpose() {
        let a = CMatrix::from_reals(
            2,
            4,
            &[
                (1., 0.),
                (0., 2.),
                (3., 0.),
                (0., 0.),
                (0., -1.),
                (2., 0.),
                (0., 0.),
                (1., 1.),
            ],
        );
        let s = svd(&a).unwrap();
        assert_eq!(s.u.rows(), 2);
        assert_eq!(s.u.cols(), 2);
        assert_eq!(s.vt.rows(), 2);
        assert_eq!(s.vt.cols(), 4);
        assert!(reconstruct(&s).max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn one_column() {
        let a = CMatrix::from_reals(3, 1, &[(3., 0.), (0., 4.), (0., 0.)]);
        let s = svd(&a).unwrap();
        assert!((s.sigma[0] - 5.0).abs() < 1e-14);
        assert!((s.vt[(0, 0)] - C_ONE).norm() < 1e-14);
    }
}
