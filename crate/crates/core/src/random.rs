//! Seeded random circuits over the library gate set, used by oracle sweeps
//! and benchmark harnesses. A seed pins the circuit exactly.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CutSpec, Gate, Qubit};

/// Uniform in [0, 1) from the top 53 bits of one draw.
pub(crate) fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    (rng.next_u64() % bound as u64) as usize
}

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitConfig {
    pub num_qubits: usize,
    pub local_gates: usize,
    pub crossing_gates: usize,
    pub seed: u64,
}

/// Mixed local and crossing gates in a shuffled order, with a uniformly
/// random cut position. Crossing gates draw from {CNOT, CZ, RZZ, SWAP} with
/// one endpoint on each side of the cut.
pub fn random_circuit(config: &RandomCircuitConfig) -> (Circuit, CutSpec) {
    let n = config.num_qubits;
    assert!(n >= 2, "need at least two qubits to place a cut");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let boundary = below(&mut rng, n - 1);
    let cut = CutSpec::new(boundary);
    let n_low = cut.n_low();

    let mut slots: Vec<bool> = Vec::with_capacity(config.local_gates + config.crossing_gates);
    slots.extend(core::iter::repeat_n(false, config.local_gates));
    slots.extend(core::iter::repeat_n(true, config.crossing_gates));
    // Fisher-Yates, deterministic under the seed.
    for i in (1..slots.len()).rev() {
        slots.swap(i, below(&mut rng, i + 1));
    }

    let mut circuit = Circuit::new(n);
    for crossing in slots {
        let gate = if crossing {
            let low = below(&mut rng, n_low) as Qubit;
            let high = (n_low + below(&mut rng, n - n_low)) as Qubit;
            match below(&mut rng, 4) {
                0 => {
                    if below(&mut rng, 2) == 0 {
                        Gate::cnot(low, high)
                    } else {
                        Gate::cnot(high, low)
                    }
                }
                1 => Gate::cz(low, high),
                2 => Gate::rzz(angle(&mut rng), low, high),
                _ => Gate::swap(low, high),
            }
        } else {
            local_gate(&mut rng, n, n_low)
        };
        circuit.push(gate).expect("generated gate in range");
    }
    (circuit, cut)
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    uniform_f64(rng) * 2.0 * core::f64::consts::PI
}

fn local_gate(rng: &mut ChaCha8Rng, n: usize, n_low: usize) -> Gate {
    // Pick the side first so both halves see local structure.
    let (base, size) = if below(rng, 2) == 0 {
        (0, n_low)
    } else {
        (n_low, n - n_low)
    };
    let q = base + below(rng, size);
    match below(rng, 5) {
        0 => Gate::h(q),
        1 => Gate::x(q),
        2 => Gate::rx(angle(rng), q),
        3 => Gate::rz(angle(rng), q),
        _ => {
            if size < 2 {
                return Gate::h(q);
            }
            let mut other = base + below(rng, size);
            while other == q {
                other = base + below(rng, size);
            }
            match below(rng, 3) {
                0 => Gate::cnot(q, other),
                1 => Gate::cz(q, other),
                _ => Gate::rzz(angle(rng), q, other),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{classify_gate, GateRegion};

    #[test]
    fn deterministic_under_seed() {
        let cfg = RandomCircuitConfig {
            num_qubits: 6,
            local_gates: 10,
            crossing_gates: 3,
            seed: 5,
        };
        let (a, ca) = random_circuit(&cfg);
        let (b, cb) = random_circuit(&cfg);
        assert_eq!(a, b);
        assert_eq!(ca, cb);
    }

    #[test]
    fn crossing_budget_is_respected() {
        for seed in 0..20 {
            let cfg = RandomCircuitConfig {
                num_qubits: 7,
                local_gates: 8,
                crossing_gates: 4,
                seed,
            };
            let (c, cut) = random_circuit(&cfg);
            let crossings = c
                .gates()
                .iter()
                .filter(|g| classify_gate(g, &cut) == GateRegion::Crossing)
                .count();
            assert_eq!(crossings, 4);
            assert_eq!(c.len(), 12);
        }
    }
}
