//! Cut planning: group crossing gates into jointly-cuttable blocks under
//! commutation-preserving reordering, decompose every cut unit, and count
//! paths for the standard (per-gate) and joint (per-block) schemes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{classify_gate, Circuit, CircuitError, CutSpec, Gate, GateRegion, Qubit};
use crate::schmidt::{
    assemble_block_matrix, rank_bound, schmidt_decompose, SchmidtDecomposition, SchmidtError,
};

/// Block matrices above this many qubits cost more to merge and decompose
/// than their path savings are worth.
pub const DEFAULT_MAX_BLOCK_QUBITS: usize = 12;

/// Union-support cap for the explicit commutator check.
const COMMUTE_NUMERIC_MAX_QUBITS: usize = 8;
const COMMUTE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PlanError {
    Circuit(CircuitError),
    Schmidt(SchmidtError),
    /// A cut unit decomposed to zero terms; its matrix was identically zero.
    DegenerateUnit {
        unit: usize,
    },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::Circuit(e) => write!(f, "{e}"),
            PlanError::Schmidt(e) => write!(f, "{e}"),
            PlanError::DegenerateUnit { unit } => {
                write!(f, "cut unit {unit} decomposed to zero terms")
            }
        }
    }
}

impl From<CircuitError> for PlanError {
    fn from(e: CircuitError) -> Self {
        PlanError::Circuit(e)
    }
}

impl From<SchmidtError> for PlanError {
    fn from(e: SchmidtError) -> Self {
        PlanError::Schmidt(e)
    }
}

/// Cut every crossing gate separately, or merge cascades first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    Standard,
    Joint,
}

/// True when swapping application order of the two gates cannot change any
/// state: disjoint targets, both diagonal, or an explicitly zero commutator
/// on the union support. Conservative `false` otherwise.
pub fn commutes(g1: &Gate, g2: &Gate) -> bool {
    let disjoint = g1.qubits().iter().all(|q| !g2.qubits().contains(q));
    if disjoint {
        return true;
    }
    if g1.is_diagonal() && g2.is_diagonal() {
        return true;
    }
    let mut union: Vec<Qubit> = g1.qubits().iter().chain(g2.qubits()).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union.len() > COMMUTE_NUMERIC_MAX_QUBITS {
        return false;
    }
    let ab = assemble_block_matrix(&[g1, g2], &union, COMMUTE_NUMERIC_MAX_QUBITS);
    let ba = assemble_block_matrix(&[g2, g1], &union, COMMUTE_NUMERIC_MAX_QUBITS);
    match (ab, ba) {
        (Ok(x), Ok(y)) => x.max_abs_diff(&y) < COMMUTE_TOL,
        _ => false,
    }
}

/// A group of crossing gates to be cut as one unit, before decomposition.
#[derive(Debug, Clone)]
pub struct BlockCandidate {
    /// Indices into the circuit's gate list, ascending.
    pub gate_indices: Vec<usize>,
    /// Original position of the first member; the unit replays here.
    pub schedule_position: usize,
}

/// Greedy cascade reassembly: walk the crossing gates in schedule order and,
/// for each ungrouped one, collect later crossing gates that share one of
/// its qubits as a cascade anchor, can be commuted adjacent to the group
/// (every skipped gate commutes with the moved one), and keep the union
/// support within `max_block_qubits`. The anchor yielding the largest group
/// wins; leftovers become singleton units.
pub fn find_blocks(
    circuit: &Circuit,
    cut: &CutSpec,
    max_block_qubits: usize,
) -> Vec<BlockCandidate> {
    let gates = circuit.gates();
    let crossing: Vec<bool> = gates
        .iter()
        .map(|g| classify_gate(g, cut) == GateRegion::Crossing)
        .collect();
    let mut grouped = vec![false; gates.len()];
    let mut out = Vec::new();

    for i in 0..gates.len() {
        if !crossing[i] || grouped[i] {
            continue;
        }
        let mut best: Vec<usize> = vec![i];
        for &anchor in gates[i].qubits() {
            let mut members = vec![i];
            let mut support: Vec<Qubit> = gates[i].qubits().to_vec();
            support.sort_unstable();
            for j in i + 1..gates.len() {
                if !crossing[j] || grouped[j] || !gates[j].qubits().contains(&anchor) {
                    continue;
                }
                let mut new_support = support.clone();
                new_support.extend_from_slice(gates[j].qubits());
                new_support.sort_unstable();
                new_support.dedup();
                if new_support.len() > max_block_qubits {
                    continue;
                }
                let movable = (i + 1..j)
                    .filter(|k| !members.contains(k))
                    .all(|k| commutes(&gates[k], &gates[j]));
                if !movable {
                    continue;
                }
                members.push(j);
                support = new_support;
            }
            if members.len() > best.len() {
                best = members;
            }
        }
        for &m in &best {
            grouped[m] = true;
        }
        out.push(BlockCandidate {
            gate_indices: best,
            schedule_position: i,
        });
    }
    out
}

/// A decomposed cut unit: one crossing gate (separate cut) or a merged
/// block, with its factorization across the cut.
#[derive(Debug, Clone)]
pub struct CutUnit {
    pub gate_indices: Vec<usize>,
    pub support_low: Vec<Qubit>,
    pub support_high: Vec<Qubit>,
    pub decomposition: SchmidtDecomposition,
    pub schedule_position: usize,
}

impl CutUnit {
    pub fn rank(&self) -> usize {
        self.decomposition.rank()
    }

    pub fn is_block(&self) -> bool {
        self.gate_indices.len() >= 2
    }
}

/// One entry of the replayed schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanStep {
    /// Gate index, local to the low partition.
    LocalLow(usize),
    /// Gate index, local to the high partition.
    LocalHigh(usize),
    /// Unit index into `CutPlan::units`.
    Unit(usize),
}

/// Per-block entry of a `PathCountReport`.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub gates: usize,
    pub rank: usize,
    /// Dimension bound `min(4^n_low', 4^n_high')` for this unit's split.
    pub rank_bound: u128,
    /// Product of the members' individual ranks: the paths this unit would
    /// cost if cut separately.
    pub member_rank_product: u128,
}

/// Standard-versus-joint path counts for one planned circuit.
#[derive(Debug, Clone)]
pub struct PathCountReport {
    /// `n_p^t`: product of per-gate ranks, every crossing gate cut alone.
    pub n_standard: u128,
    /// `n_p^j`: product of per-unit ranks.
    pub n_joint: u128,
    pub block_count: usize,
    pub separate_count: usize,
    /// Total crossing gates: the separate cuts a per-gate scheme performs.
    pub crossing_gates: usize,
    pub blocks: Vec<BlockReport>,
}

fn split_support(gates: &[&Gate], cut: &CutSpec) -> (Vec<Qubit>, Vec<Qubit>) {
    let mut support: Vec<Qubit> = gates
        .iter()
        .flat_map(|g| g.qubits().iter().copied())
        .collect();
    support.sort_unstable();
    support.dedup();
    let split = support.partition_point(|&q| cut.is_low(q));
    let high = support.split_off(split);
    (support, high)
}

fn decompose_unit(
    circuit: &Circuit,
    cut: &CutSpec,
    candidate: &BlockCandidate,
    max_block_qubits: usize,
    tol: f64,
) -> Result<CutUnit, PlanError> {
    let gates: Vec<&Gate> = candidate
        .gate_indices
        .iter()
        .map(|&i| &circuit.gates()[i])
        .collect();
    let (support_low, support_high) = split_support(&gates, cut);
    let mut support = support_low.clone();
    support.extend_from_slice(&support_high);
    let matrix = assemble_block_matrix(&gates, &support, max_block_qubits)?;
    let decomposition = schmidt_decompose(&matrix, support_low.len(), tol)?;
    Ok(CutUnit {
        gate_indices: candidate.gate_indices.clone(),
        support_low,
        support_high,
        decomposition,
        schedule_position: candidate.schedule_position,
    })
}

/// Rank of one crossing gate decomposed on its own support.
fn single_gate_rank(gate: &Gate, cut: &CutSpec, tol: f64) -> Result<usize, PlanError> {
    let gates = [gate];
    let (low, high) = split_support(&gates, cut);
    let mut support = low.clone();
    support.extend_from_slice(&high);
    let matrix = assemble_block_matrix(&gates, &support, support.len())?;
    Ok(schmidt_decompose(&matrix, low.len(), tol)?.rank())
}

/// Compare per-gate cutting against the given units. `n_standard` always
/// re-decomposes every crossing gate individually, so the two counts are
/// directly comparable no matter how the units were formed.
pub fn path_counts(
    circuit: &Circuit,
    cut: &CutSpec,
    units: &[CutUnit],
    tol: f64,
) -> Result<PathCountReport, PlanError> {
    let mut n_standard: u128 = 1;
    let mut crossing_gates = 0usize;
    for gate in circuit.gates() {
        if classify_gate(gate, cut) == GateRegion::Crossing {
            crossing_gates += 1;
            n_standard = n_standard.saturating_mul(single_gate_rank(gate, cut, tol)? as u128);
        }
    }
    let mut n_joint: u128 = 1;
    let mut blocks = Vec::new();
    let mut block_count = 0;
    let mut separate_count = 0;
    for unit in units {
        n_joint = n_joint.saturating_mul(unit.rank() as u128);
        if unit.is_block() {
            block_count += 1;
            let mut member_rank_product: u128 = 1;
            for &gi in &unit.gate_indices {
                member_rank_product = member_rank_product.saturating_mul(single_gate_rank(
                    &circuit.gates()[gi],
                    cut,
                    tol,
                )?
                    as u128);
            }
            blocks.push(BlockReport {
                gates: unit.gate_indices.len(),
                rank: unit.rank(),
                rank_bound: rank_bound(unit.support_low.len(), unit.support_high.len()),
                member_rank_product,
            });
        } else {
            separate_count += 1;
        }
    }
    Ok(PathCountReport {
        n_standard,
        n_joint,
        block_count,
        separate_count,
        crossing_gates,
        blocks,
    })
}

/// A fully-decomposed execution plan: local gates bound to their earliest
/// legal slot, cut units in schedule order, and the resulting path count.
/// Immutable; share it read-only across path workers.
#[derive(Debug, Clone)]
pub struct CutPlan {
    circuit: Circuit,
    cut: CutSpec,
    steps: Vec<PlanStep>,
    units: Vec<CutUnit>,
    counts: PathCountReport,
    n_paths: u128,
}

impl CutPlan {
    #[inline]
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    #[inline]
    pub fn cut(&self) -> &CutSpec {
        &self.cut
    }

    #[inline]
    pub fn steps(&self) -> &[PlanStep] {
        &self.steps
    }

    #[inline]
    pub fn units(&self) -> &[CutUnit] {
        &self.units
    }

    #[inline]
    pub fn counts(&self) -> &PathCountReport {
        &self.counts
    }

    /// Total path count: the product of all unit ranks.
    #[inline]
    pub fn n_paths(&self) -> u128 {
        self.n_paths
    }

    pub fn unit_ranks(&self) -> Vec<usize> {
        self.units.iter().map(CutUnit::rank).collect()
    }

    /// Flatten the plan back into a plain circuit (units expanded in member
    /// order at their schedule position). Its action must equal the source
    /// circuit's; tests compare dense unitaries.
    pub fn replay_circuit(&self) -> Circuit {
        let mut out = Circuit::new(self.circuit.num_qubits());
        for step in &self.steps {
            match step {
                PlanStep::LocalLow(i) | PlanStep::LocalHigh(i) => {
                    out.push(self.circuit.gates()[*i].clone()).unwrap();
                }
                PlanStep::Unit(u) => {
                    for &gi in &self.units[*u].gate_indices {
                        out.push(self.circuit.gates()[gi].clone()).unwrap();
                    }
                }
            }
        }
        out
    }
}

/// Plan a circuit for the given cut. In `Standard` mode every crossing gate
/// becomes its own unit; in `Joint` mode cascades are merged first. A block
/// whose assembly exceeds the support cap falls back to separate cuts.
pub fn build_plan(
    circuit: &Circuit,
    cut: CutSpec,
    mode: PlanMode,
    max_block_qubits: usize,
    tol: f64,
) -> Result<CutPlan, PlanError> {
    cut.validate(circuit.num_qubits())?;
    let singletons = |c: &Circuit| -> Vec<BlockCandidate> {
        c.gates()
            .iter()
            .enumerate()
            .filter(|(_, g)| classify_gate(g, &cut) == GateRegion::Crossing)
            .map(|(i, _)| BlockCandidate {
                gate_indices: vec![i],
                schedule_position: i,
            })
            .collect()
    };
    let candidates = match mode {
        PlanMode::Standard => singletons(circuit),
        PlanMode::Joint => find_blocks(circuit, &cut, max_block_qubits),
    };

    let mut units: Vec<CutUnit> = Vec::new();
    for candidate in &candidates {
        match decompose_unit(circuit, &cut, candidate, max_block_qubits, tol) {
            Ok(unit) => units.push(unit),
            Err(PlanError::Schmidt(SchmidtError::SupportCapExceeded { .. }))
                if candidate.gate_indices.len() >= 2 =>
            {
                // Oversized block: fall back to separate cuts.
                for &gi in &candidate.gate_indices {
                    let single = BlockCandidate {
                        gate_indices: vec![gi],
                        schedule_position: gi,
                    };
                    units.push(decompose_unit(
                        circuit,
                        &cut,
                        &single,
                        max_block_qubits,
                        tol,
                    )?);
                }
            }
            Err(e) => return Err(e),
        }
    }
    units.sort_by_key(|u| u.schedule_position);
    for (idx, unit) in units.iter().enumerate() {
        if unit.rank() == 0 {
            return Err(PlanError::DegenerateUnit { unit: idx });
        }
    }

    // Interleave: each gate appears exactly once, units at their seed slot.
    let mut unit_at = vec![usize::MAX; circuit.len()];
    let mut member = vec![false; circuit.len()];
    for (u, unit) in units.iter().enumerate() {
        unit_at[unit.schedule_position] = u;
        for &gi in &unit.gate_indices {
            member[gi] = true;
        }
    }
    let mut steps = Vec::new();
    for (i, gate) in circuit.gates().iter().enumerate() {
        if unit_at[i] != usize::MAX {
            steps.push(PlanStep::Unit(unit_at[i]));
        } else if !member[i] {
            match classify_gate(gate, &cut) {
                GateRegion::LocalLow => steps.push(PlanStep::LocalLow(i)),
                GateRegion::LocalHigh => steps.push(PlanStep::LocalHigh(i)),
                GateRegion::Crossing => unreachable!("crossing gate outside any unit"),
            }
        }
    }

    let counts = path_counts(circuit, &cut, &units, tol)?;
    let n_paths = units
        .iter()
        .fold(1u128, |acc, u| acc.saturating_mul(u.rank() as u128));
    Ok(CutPlan {
        circuit: circuit.clone(),
        cut,
        steps,
        units,
        counts,
        n_paths,
    })
}
