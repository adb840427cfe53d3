//! Benchmark circuit family: stochastic-block-model MaxCut graphs and QAOA
//! circuits with RZZ problem layers and RX mixers, with the cut placed
//! between the two graph partitions.

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CutSpec, Gate, Qubit};
use crate::random::uniform_f64;

/// Fixed fallback angles; any non-degenerate value works for correctness
/// checks, and zero would collapse every RZZ rank to 1.
pub const DEFAULT_GAMMA: f64 = 0.4;
pub const DEFAULT_BETA: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub enum QaoaError {
    EmptyPartition,
    AngleCount {
        layers: usize,
        gammas: usize,
        betas: usize,
    },
}

impl fmt::Display for QaoaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QaoaError::EmptyPartition => write!(f, "both graph partitions must be non-empty"),
            QaoaError::AngleCount {
                layers,
                gammas,
                betas,
            } => {
                write!(f, "{layers} layer(s) need {layers} angles each, got {gammas} gamma(s) and {betas} beta(s)")
            }
        }
    }
}

/// Two-community random graph: vertices `0..n1` form partition 1 (the low
/// side of the cut), `n1..n1+n2` partition 2.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModelGraph {
    pub sizes: [usize; 2],
    pub p_intra: f64,
    pub p_inter: f64,
    pub edges: Vec<(usize, usize)>,
    pub seed: u64,
}

impl BlockModelGraph {
    pub fn num_vertices(&self) -> usize {
        self.sizes[0] + self.sizes[1]
    }

    pub fn is_inter(&self, (u, v): (usize, usize)) -> bool {
        (u < self.sizes[0]) != (v < self.sizes[0])
    }

    pub fn inter_edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| self.is_inter(e)).count()
    }
}

/// Draw each intra-partition pair with probability `p_intra` and each
/// inter-partition pair with `p_inter`. Pairs are visited in a fixed
/// lexicographic order with one draw each, so a seed pins the graph.
pub fn sbm_graph(sizes: [usize; 2], p_intra: f64, p_inter: f64, seed: u64) -> BlockModelGraph {
    let n = sizes[0] + sizes[1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let inter = (u < sizes[0]) != (v < sizes[0]);
            let p = if inter { p_inter } else { p_intra };
            if uniform_f64(&mut rng) < p {
                edges.push((u, v));
            }
        }
    }
    BlockModelGraph {
        sizes,
        p_intra,
        p_inter,
        edges,
        seed,
    }
}

/// A generated benchmark instance; the circuit and cut are derived
/// deterministically from the graph and angles.
#[derive(Debug, Clone)]
pub struct QaoaInstance {
    pub graph: BlockModelGraph,
    pub layers: usize,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub initial_h: bool,
    pub circuit: Circuit,
    pub cut: CutSpec,
}

/// Build the QAOA circuit: an optional Hadamard layer, then per layer one
/// RZZ(2γ) per edge and one RX(2β) per qubit. Inter-partition edges are
/// emitted first, grouped by their low-side anchor, so cascades sit
/// adjacent in the schedule; intra edges follow in lexicographic order.
/// The cut falls between the partitions. All RZZ gates of a layer commute,
/// so this ordering freedom never changes the layer's action.
pub fn qaoa_circuit(
    graph: &BlockModelGraph,
    layers: usize,
    gammas: &[f64],
    betas: &[f64],
    initial_h: bool,
) -> Result<QaoaInstance, QaoaError> {
    if graph.sizes[0] == 0 || graph.sizes[1] == 0 {
        return Err(QaoaError::EmptyPartition);
    }
    if gammas.len() != layers || betas.len() != layers {
        return Err(QaoaError::AngleCount {
            layers,
            gammas: gammas.len(),
            betas: betas.len(),
        });
    }
    let n = graph.num_vertices();
    let cut = CutSpec::new(graph.sizes[0] - 1);

    let mut inter: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .copied()
        .filter(|&e| graph.is_inter(e))
        .collect();
    // Low endpoint first; group by anchor, then by target.
    inter.sort_by_key(|&(u, v)| (u.min(v), u.max(v)));
    let mut intra: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .copied()
        .filter(|&e| !graph.is_inter(e))
        .collect();
    intra.sort_unstable();

    let mut circuit = Circuit::new(n);
    let push = |c: &mut Circuit, g: Gate| c.push(g).expect("generated gate in range");
    if initial_h {
        for q in 0..n {
            push(&mut circuit, Gate::h(q));
        }
    }
    for layer in 0..layers {
        let gamma = gammas[layer];
        let beta = betas[layer];
        for &(u, v) in &inter {
            push(
                &mut circuit,
                Gate::rzz(2.0 * gamma, u.min(v) as Qubit, u.max(v) as Qubit),
            );
        }
        for &(u, v) in &intra {
            push(&mut circuit, Gate::rzz(2.0 * gamma, u, v));
        }
        for q in 0..n {
            push(&mut circuit, Gate::rx(2.0 * beta, q));
        }
    }
    Ok(QaoaInstance {
        graph: graph.clone(),
        layers,
        gammas: gammas.to_vec(),
        betas: betas.to_vec(),
        initial_h,
        circuit,
        cut,
    })
}
