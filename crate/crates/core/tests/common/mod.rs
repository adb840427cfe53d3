//! Independent reference implementations used as test oracles. These stay
//! deliberately naive — full dense embeddings and explicit products — so
//! they share no code path with the kernels they check.
#![allow(dead_code)] // each test binary uses its own subset

use hsf_core::circuit::Circuit;
use hsf_core::linalg::CMatrix;
use hsf_core::Complex64;

pub fn naive_matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.cols(), b.rows());
    let zero = Complex64::new(0.0, 0.0);
    let mut out = CMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let aik = a[(i, k)];
            if aik == zero {
                // Embedded gate matrices are mostly zeros; skipping exact
                // zeros changes nothing about the product.
                continue;
            }
            for j in 0..b.cols() {
                let t = aik * b[(k, j)];
                out[(i, j)] += t;
            }
        }
    }
    out
}

pub fn naive_matvec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Embed a gate matrix into the full 2^n space entry by entry: the entry
/// (i, j) is nonzero only when all non-target bits agree, and then equals
/// the gate entry at the extracted target bits (`qubits[0]` most
/// significant).
pub fn naive_embed(mat: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let k = qubits.len();
    let rest_mask = {
        let mut m = usize::MAX >> (usize::BITS as usize - n);
        for &q in qubits {
            m &= !(1usize << q);
        }
        m
    };
    let extract = |idx: usize| -> usize {
        let mut local = 0usize;
        for (pos, &q) in qubits.iter().enumerate() {
            if (idx >> q) & 1 == 1 {
                local |= 1 << (k - 1 - pos);
            }
        }
        local
    };
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if (i & rest_mask) == (j & rest_mask) {
                out[(i, j)] = mat[(extract(i), extract(j))];
            }
        }
    }
    out
}

/// Dense unitary of a circuit as an explicit matrix chain.
pub fn naive_circuit_unitary(circuit: &Circuit) -> CMatrix {
    let n = circuit.num_qubits();
    let mut acc = CMatrix::identity(1 << n);
    for gate in circuit.gates() {
        let embedded = naive_embed(gate.matrix(), gate.qubits(), n);
        acc = naive_matmul(&embedded, &acc);
    }
    acc
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
