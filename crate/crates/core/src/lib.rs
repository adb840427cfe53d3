//! Hybrid Schrödinger-Feynman (HSF) quantum circuit simulation with joint
//! gate cutting.
//!
//! The register is split at a qubit boundary into a low and a high partition.
//! Gates local to one partition are applied directly; gates crossing the
//! boundary are Schmidt-decomposed into sums of local factor pairs. Every
//! choice of one term per decomposed unit is a "path": a pair of independent
//! half-register simulations whose weighted Kronecker products sum to the
//! full state. Grouping crossing gates into blocks and decomposing the block
//! once ("joint cutting") bounds the path count by the block's Schmidt rank
//! instead of the product of per-gate ranks.
//!
//! The crate is `no_std` + `alloc`; execution policy (threads, timing,
//! file formats) lives in the companion `hsf-sim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod hsf;
pub mod linalg;
pub mod plan;
pub mod qaoa;
pub mod random;
pub mod schmidt;
pub mod schrodinger;

pub use num_complex::Complex64;

/// Cooperative cancellation checked between gates and between paths.
pub trait Cancel: Sync {
    fn is_cancelled(&self) -> bool;
}

/// The no-op token used when no deadline applies.
pub struct NeverCancel;

impl Cancel for NeverCancel {
    #[inline]
    fn is_cancelled(&self) -> bool {
        false
    }
}
