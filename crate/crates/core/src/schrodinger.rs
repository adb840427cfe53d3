//! Full-statevector simulation by consecutive gate application; the
//! reference engine every decomposed simulation is checked against.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::circuit::{apply_gate, Circuit};
use crate::linalg::{CMatrix, LinalgError, Statevector};
use crate::schmidt::{assemble_block_matrix, SchmidtError};
use crate::Cancel;

/// Full-state cap: 2^28 complex doubles is 4 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 28;

/// Register size cap for materializing a circuit's dense unitary.
pub const DENSE_UNITARY_MAX_QUBITS: usize = 13;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// Register exceeds the configured full-state memory budget.
    TooManyQubits {
        n: usize,
        cap: usize,
    },
    /// Requested more amplitudes than the state holds.
    AmpCountTooLarge {
        requested: usize,
        dim_log2: usize,
    },
    Cancelled,
    Linalg(LinalgError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::TooManyQubits { n, cap } => {
                write!(f, "{n} qubits exceed the configured cap of {cap}")
            }
            SimError::AmpCountTooLarge {
                requested,
                dim_log2,
            } => {
                write!(
                    f,
                    "requested {requested} amplitudes from a 2^{dim_log2} state"
                )
            }
            SimError::Cancelled => write!(f, "simulation cancelled"),
            SimError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinalgError> for SimError {
    fn from(e: LinalgError) -> Self {
        SimError::Linalg(e)
    }
}

/// How many output amplitudes to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmpSelection {
    All,
    /// The first `k` amplitudes, indices `0..k` in the register's bit
    /// convention. Purely an output restriction; the full state is still
    /// computed.
    Prefix(usize),
}

impl AmpSelection {
    pub fn resolve(self, n: usize) -> Result<usize, SimError> {
        let dim = 1usize << n;
        match self {
            AmpSelection::All => Ok(dim),
            AmpSelection::Prefix(k) => {
                if k > dim {
                    Err(SimError::AmpCountTooLarge {
                        requested: k,
                        dim_log2: n,
                    })
                } else {
                    Ok(k)
                }
            }
        }
    }
}

/// Evolve |0...0⟩ through the circuit and return the full state.
pub fn full_state(
    circuit: &Circuit,
    max_qubits: usize,
    cancel: &dyn Cancel,
) -> Result<Statevector, SimError> {
    let n = circuit.num_qubits();
    if n > max_qubits {
        return Err(SimError::TooManyQubits { n, cap: max_qubits });
    }
    let mut state = Statevector::zero_state(n);
    for gate in circuit.gates() {
        if cancel.is_cancelled() {
            return Err(SimError::Cancelled);
        }
        apply_gate(&mut state, gate)?;
    }
    Ok(state)
}

/// Simulate and return the requested amplitude prefix.
pub fn simulate(
    circuit: &Circuit,
    amps: AmpSelection,
    max_qubits: usize,
    cancel: &dyn Cancel,
) -> Result<Vec<Complex64>, SimError> {
    let count = amps.resolve(circuit.num_qubits())?;
    let state = full_state(circuit, max_qubits, cancel)?;
    Ok(state.amplitudes()[..count].to_vec())
}

/// Dense `2^n` unitary of the whole circuit (small registers only); used
/// to validate that reordered schedules preserve circuit semantics.
pub fn dense_unitary(circuit: &Circuit) -> Result<CMatrix, SchmidtError> {
    let n = circuit.num_qubits();
    let support: Vec<usize> = (0..n).collect();
    let gates: Vec<&_> = circuit.gates().iter().collect();
    assemble_block_matrix(&gates, &support, DENSE_UNITARY_MAX_QUBITS)
}
