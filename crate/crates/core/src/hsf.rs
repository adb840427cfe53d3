//! Hybrid Schrödinger-Feynman execution of a cut plan: enumerate paths,
//! simulate a pair of half-register circuits per path, and sum the weighted
//! Kronecker products into the requested amplitude prefix.
//!
//! Per-path working memory is two half-states of 2^n_low and 2^n_high
//! amplitudes (plus one checkpoint pair for prefix reuse); the full 2^n
//! state is never materialized beyond the output buffer.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::circuit::{Circuit, CutSpec, Gate};
use crate::linalg::{LinalgError, Statevector, C_ZERO};
use crate::plan::{build_plan, CutPlan, CutUnit, PlanError, PlanMode, PlanStep};
use crate::schrodinger::{AmpSelection, SimError};
use crate::Cancel;

/// Refuse path spaces bigger than this by default; anything beyond it means
/// days of compute and deserves an explicit override.
pub const DEFAULT_PATH_BUDGET: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub enum HsfError {
    Plan(PlanError),
    Sim(SimError),
    Linalg(LinalgError),
    /// The plan's path count exceeds the configured budget.
    PathBudgetExceeded {
        n_paths: u128,
        budget: u128,
    },
    /// Recombination saw a different number of paths than the plan holds.
    PathCountMismatch {
        expected: u128,
        got: u128,
    },
    BadRange {
        lo: u128,
        hi: u128,
        n_paths: u128,
    },
    Cancelled,
}

impl fmt::Display for HsfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HsfError::Plan(e) => write!(f, "{e}"),
            HsfError::Sim(e) => write!(f, "{e}"),
            HsfError::Linalg(e) => write!(f, "{e}"),
            HsfError::PathBudgetExceeded { n_paths, budget } => {
                write!(f, "{n_paths} paths exceed the budget of {budget}")
            }
            HsfError::PathCountMismatch { expected, got } => {
                write!(f, "expected {expected} path results, got {got}")
            }
            HsfError::BadRange { lo, hi, n_paths } => {
                write!(f, "path range {lo}..{hi} invalid for {n_paths} paths")
            }
            HsfError::Cancelled => write!(f, "simulation cancelled"),
        }
    }
}

impl From<PlanError> for HsfError {
    fn from(e: PlanError) -> Self {
        HsfError::Plan(e)
    }
}

impl From<SimError> for HsfError {
    fn from(e: SimError) -> Self {
        HsfError::Sim(e)
    }
}

impl From<LinalgError> for HsfError {
    fn from(e: LinalgError) -> Self {
        HsfError::Linalg(e)
    }
}

/// Mixed-radix path label: digit k selects a term of unit k, with unit 0 as
/// the most significant digit of the linear index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathIndex {
    pub linear: u128,
    pub digits: Vec<usize>,
}

/// The path space of a plan: one digit per cut unit.
#[derive(Debug, Clone)]
pub struct PathSpace {
    radices: Vec<usize>,
    n_paths: u128,
}

impl PathSpace {
    pub(crate) fn from_radices(radices: Vec<usize>) -> PathSpace {
        let n_paths = radices
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
        PathSpace { radices, n_paths }
    }

    #[inline]
    pub fn n_paths(&self) -> u128 {
        self.n_paths
    }

    #[inline]
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn digits(&self, linear: u128) -> PathIndex {
        let mut digits = vec![0usize; self.radices.len()];
        let mut rem = linear;
        for (k, &r) in self.radices.iter().enumerate().rev() {
            digits[k] = (rem % r as u128) as usize;
            rem /= r as u128;
        }
        PathIndex { linear, digits }
    }

    /// Ascending iteration over `lo..hi`.
    pub fn iter_range(&self, lo: u128, hi: u128) -> impl Iterator<Item = PathIndex> + '_ {
        (lo..hi).map(move |p| self.digits(p))
    }

    pub fn iter(&self) -> impl Iterator<Item = PathIndex> + '_ {
        self.iter_range(0, self.n_paths)
    }

    /// Split `0..n_paths` into at most `chunks` contiguous ranges of nearly
    /// equal size, for distribution to parallel workers.
    pub fn split(&self, chunks: usize) -> Vec<(u128, u128)> {
        let chunks = chunks.max(1) as u128;
        let total = self.n_paths;
        let per = total.div_ceil(chunks).max(1);
        let mut out = Vec::new();
        let mut lo = 0u128;
        while lo < total {
            let hi = (lo + per).min(total);
            out.push((lo, hi));
            lo = hi;
        }
        out
    }
}

/// Validate the plan's path count against a budget and expose the space.
pub fn enumerate_paths(plan: &CutPlan, budget: u128) -> Result<PathSpace, HsfError> {
    let space = PathSpace::from_radices(plan.unit_ranks());
    if space.n_paths() > budget {
        return Err(HsfError::PathBudgetExceeded {
            n_paths: space.n_paths(),
            budget,
        });
    }
    Ok(space)
}

/// One simulated path: a weight and the two half-register states whose
/// Kronecker product it contributes.
#[derive(Debug, Clone)]
pub struct PathResult {
    pub coefficient: Complex64,
    pub state_low: Statevector,
    pub state_high: Statevector,
}

/// Half-state allocation accounting for the memory contract.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoryStats {
    /// Largest single half-state buffer, in complex values.
    pub peak_half_state_len: usize,
    /// Number of half-state buffers allocated.
    pub half_state_allocations: usize,
    /// Sum of all half-state buffer lengths.
    pub total_half_state_len: usize,
}

enum RunnerOp<'p> {
    /// Low-side local gate; targets are already half-local.
    Low(&'p Gate),
    /// High-side local gate with shifted targets (most significant first).
    High(&'p Gate, Vec<usize>),
    /// Cut unit: digit position plus factor targets for each half.
    Unit {
        unit: &'p CutUnit,
        ordinal: usize,
        low_targets: Vec<usize>,
        high_targets: Vec<usize>,
    },
}

/// Replays a plan for one path at a time, owning its half-state buffers
/// exclusively. Prefixes shared by consecutive paths (all digits equal
/// except the last unit's) are simulated once and checkpointed.
pub struct PathRunner<'p> {
    ops: Vec<RunnerOp<'p>>,
    /// Position in `ops` of the final unit, if any.
    last_unit_op: Option<usize>,
    radices: Vec<usize>,
    n_low: usize,
    low: Statevector,
    high: Statevector,
    ckpt: Option<(Statevector, Statevector)>,
    stats: MemoryStats,
}

impl<'p> PathRunner<'p> {
    pub fn new(plan: &'p CutPlan) -> PathRunner<'p> {
        let cut = plan.cut();
        let n = plan.circuit().num_qubits();
        let n_low = cut.n_low();
        let n_high = cut.n_high(n);

        let mut ops = Vec::with_capacity(plan.steps().len());
        let mut last_unit_op = None;
        for step in plan.steps() {
            match *step {
                PlanStep::LocalLow(i) => ops.push(RunnerOp::Low(&plan.circuit().gates()[i])),
                PlanStep::LocalHigh(i) => {
                    let gate = &plan.circuit().gates()[i];
                    let targets = gate.qubits().iter().map(|&q| q - n_low).collect();
                    ops.push(RunnerOp::High(gate, targets));
                }
                PlanStep::Unit(u) => {
                    let unit = &plan.units()[u];
                    // apply_matrix wants most-significant-first target lists;
                    // factor bit j addresses the j-th lowest support qubit.
                    let low_targets: Vec<usize> = unit.support_low.iter().rev().copied().collect();
                    let high_targets: Vec<usize> =
                        unit.support_high.iter().rev().map(|&q| q - n_low).collect();
                    last_unit_op = Some(ops.len());
                    ops.push(RunnerOp::Unit {
                        unit,
                        ordinal: u,
                        low_targets,
                        high_targets,
                    });
                }
            }
        }

        let mut stats = MemoryStats::default();
        let mut alloc_half = |qubits: usize| {
            let len = 1usize << qubits;
            stats.peak_half_state_len = stats.peak_half_state_len.max(len);
            stats.half_state_allocations += 1;
            stats.total_half_state_len += len;
            Statevector::zero_state(qubits)
        };
        let low = alloc_half(n_low);
        let high = alloc_half(n_high);
        let ckpt = if last_unit_op.is_some() {
            Some((alloc_half(n_low), alloc_half(n_high)))
        } else {
            None
        };

        PathRunner {
            ops,
            last_unit_op,
            radices: plan.unit_ranks(),
            n_low,
            low,
            high,
            ckpt,
            stats,
        }
    }

    #[inline]
    pub fn stats(&self) -> MemoryStats {
        self.stats
    }

    fn apply_op(&mut self, op_idx: usize, digits: &[usize]) -> Result<f64, HsfError> {
        match &self.ops[op_idx] {
            RunnerOp::Low(gate) => {
                self.low.apply_matrix(gate.matrix(), gate.qubits())?;
                Ok(1.0)
            }
            RunnerOp::High(gate, targets) => {
                self.high.apply_matrix(gate.matrix(), targets)?;
                Ok(1.0)
            }
            RunnerOp::Unit {
                unit,
                ordinal,
                low_targets,
                high_targets,
            } => {
                let term = &unit.decomposition.terms()[digits[*ordinal]];
                self.low.apply_matrix(&term.y, low_targets)?;
                self.high.apply_matrix(&term.x, high_targets)?;
                Ok(term.sigma)
            }
        }
    }

    /// Run one complete path from scratch.
    fn run_full(&mut self, digits: &[usize]) -> Result<f64, HsfError> {
        self.low.reset();
        self.high.reset();
        let mut coeff = 1.0;
        for idx in 0..self.ops.len() {
            coeff *= self.apply_op(idx, digits)?;
        }
        Ok(coeff)
    }

    /// Accumulate `c_p · high[i >> n_low] · low[i & mask]` for every path in
    /// `lo..hi` into `partial` (the first `partial.len()` amplitudes).
    /// Consecutive paths differing only in the last unit's digit reuse the
    /// checkpointed prefix. Returns the number of paths executed.
    pub fn accumulate_range(
        &mut self,
        lo: u128,
        hi: u128,
        partial: &mut [Complex64],
        cancel: &dyn Cancel,
    ) -> Result<u128, HsfError> {
        let n_paths = self
            .radices
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
        if lo > hi || hi > n_paths {
            return Err(HsfError::BadRange { lo, hi, n_paths });
        }

        let Some(last_op) = self.last_unit_op else {
            // No cut units: the single path is two independent simulations.
            if lo == 0 && hi >= 1 {
                let coeff = self.run_full(&[])?;
                self.emit(coeff, partial);
                return Ok(1);
            }
            return Ok(0);
        };

        let r_last = *self.radices.last().expect("unit exists") as u128;
        let mut digits = vec![0usize; self.radices.len()];
        let mut executed = 0u128;
        let mut p = lo;
        while p < hi {
            if cancel.is_cancelled() {
                return Err(HsfError::Cancelled);
            }
            let prefix = p / r_last;
            let group_end = ((prefix + 1) * r_last).min(hi);
            decompose_digits(prefix, &self.radices[..self.radices.len() - 1], &mut digits);

            // Shared prefix: everything before the final unit.
            self.low.reset();
            self.high.reset();
            let mut prefix_coeff = 1.0;
            for idx in 0..last_op {
                prefix_coeff *= self.apply_op(idx, &digits)?;
            }
            let (ckpt_low, ckpt_high) = self.ckpt.as_mut().expect("checkpoint allocated");
            ckpt_low.copy_from(&self.low);
            ckpt_high.copy_from(&self.high);

            for d in (p - prefix * r_last) as usize..(group_end - prefix * r_last) as usize {
                if d as u128 != p - prefix * r_last {
                    let (ckpt_low, ckpt_high) = self.ckpt.as_ref().expect("checkpoint");
                    self.low.copy_from(ckpt_low);
                    self.high.copy_from(ckpt_high);
                }
                *digits.last_mut().expect("unit exists") = d;
                let mut coeff = prefix_coeff * self.apply_op(last_op, &digits)?;
                for idx in last_op + 1..self.ops.len() {
                    coeff *= self.apply_op(idx, &digits)?;
                }
                self.emit(coeff, partial);
                executed += 1;
            }
            p = group_end;
        }
        Ok(executed)
    }

    fn emit(&self, coeff: f64, partial: &mut [Complex64]) {
        accumulate_product(
            partial,
            Complex64::new(coeff, 0.0),
            self.high.amplitudes(),
            self.low.amplitudes(),
            self.n_low,
        );
    }
}

fn decompose_digits(mut linear: u128, radices: &[usize], digits: &mut [usize]) {
    for (k, &r) in radices.iter().enumerate().rev() {
        digits[k] = (linear % r as u128) as usize;
        linear /= r as u128;
    }
}

/// `partial[i] += c · high[i >> n_low] · low[i & (2^n_low - 1)]`.
fn accumulate_product(
    partial: &mut [Complex64],
    c: Complex64,
    high: &[Complex64],
    low: &[Complex64],
    n_low: usize,
) {
    let block = 1usize << n_low;
    for (i_high, chunk) in partial.chunks_mut(block).enumerate() {
        let weighted = c * high[i_high];
        for (out, &l) in chunk.iter_mut().zip(low) {
            *out += weighted * l;
        }
    }
}

/// Simulate a single path in isolation.
pub fn simulate_path(plan: &CutPlan, path: &PathIndex) -> Result<PathResult, HsfError> {
    let mut runner = PathRunner::new(plan);
    let coeff = runner.run_full(&path.digits)?;
    Ok(PathResult {
        coefficient: Complex64::new(coeff, 0.0),
        state_low: runner.low.clone(),
        state_high: runner.high.clone(),
    })
}

/// Sum weighted Kronecker products of complete path results into the first
/// `amp_count` amplitudes. Every path must be present exactly once;
/// `expected_paths` guards against missed or duplicated work.
pub fn recombine<I>(
    results: I,
    amp_count: usize,
    expected_paths: u128,
) -> Result<Vec<Complex64>, HsfError>
where
    I: IntoIterator<Item = PathResult>,
{
    let mut partial = vec![C_ZERO; amp_count];
    let mut seen = 0u128;
    for r in results {
        let n_low = r.state_low.num_qubits();
        accumulate_product(
            &mut partial,
            r.coefficient,
            r.state_high.amplitudes(),
            r.state_low.amplitudes(),
            n_low,
        );
        seen += 1;
    }
    if seen != expected_paths {
        return Err(HsfError::PathCountMismatch {
            expected: expected_paths,
            got: seen,
        });
    }
    Ok(partial)
}

/// Knobs for a decomposed simulation.
#[derive(Debug, Clone, Copy)]
pub struct HsfConfig {
    pub max_block_qubits: usize,
    pub truncation_tol: f64,
    pub path_budget: u128,
}

impl Default for HsfConfig {
    fn default() -> Self {
        HsfConfig {
            max_block_qubits: crate::plan::DEFAULT_MAX_BLOCK_QUBITS,
            truncation_tol: crate::schmidt::DEFAULT_TRUNCATION_TOL,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

/// A completed decomposed simulation.
#[derive(Debug, Clone)]
pub struct HsfRun {
    pub amplitudes: Vec<Complex64>,
    pub n_paths: u128,
    pub stats: MemoryStats,
}

/// Plan, enumerate, simulate every path, and recombine — sequentially.
/// Callers that want worker parallelism split the path space themselves and
/// drive one `PathRunner` per worker.
pub fn hsf_simulate(
    circuit: &Circuit,
    cut: CutSpec,
    mode: PlanMode,
    amps: AmpSelection,
    config: &HsfConfig,
    cancel: &dyn Cancel,
) -> Result<HsfRun, HsfError> {
    let plan = build_plan(
        circuit,
        cut,
        mode,
        config.max_block_qubits,
        config.truncation_tol,
    )?;
    let space = enumerate_paths(&plan, config.path_budget)?;
    let amp_count = amps.resolve(circuit.num_qubits())?;
    let mut partial = vec![C_ZERO; amp_count];
    let mut runner = PathRunner::new(&plan);
    let executed = runner.accumulate_range(0, space.n_paths(), &mut partial, cancel)?;
    if executed != space.n_paths() {
        return Err(HsfError::PathCountMismatch {
            expected: space.n_paths(),
            got: executed,
        });
    }
    Ok(HsfRun {
        amplitudes: partial,
        n_paths: space.n_paths(),
        stats: runner.stats(),
    })
}
