//! Circuit intermediate representation: gate library with dense matrices,
//! cut specification, and the line-based circuit text format.
//!
//! Bit convention: qubit 0 is the least significant bit of a basis-state
//! index `i = (i_{n-1}, ..., i_0)`, so |00⟩ = `[1,0,0,0]^T` on two qubits.
//! Within a gate matrix, `qubits[0]` addresses the highest-order tensor
//! factor; CNOT with qubits `[control, target]` is therefore the literal
//! P0⊗I + P1⊗X.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use crate::linalg::{CMatrix, LinalgError, Statevector, C_ONE, C_ZERO};

/// Index of a qubit wire; always `< Circuit::num_qubits`.
pub type Qubit = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitError {
    UnknownGate(String),
    ParamCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    QubitCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    DuplicateQubit(Qubit),
    QubitOutOfRange {
        qubit: Qubit,
        num_qubits: usize,
    },
    MatrixSize {
        rows: usize,
        cols: usize,
        qubits: usize,
    },
    /// Raw-matrix gates have no text representation.
    UnserializableGate,
    Malformed(String),
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitError::UnknownGate(name) => write!(f, "unknown gate `{name}`"),
            CircuitError::ParamCount {
                gate,
                expected,
                got,
            } => {
                write!(f, "gate `{gate}` takes {expected} parameter(s), got {got}")
            }
            CircuitError::QubitCount {
                gate,
                expected,
                got,
            } => {
                write!(f, "gate `{gate}` takes {expected} qubit(s), got {got}")
            }
            CircuitError::DuplicateQubit(q) => write!(f, "duplicate qubit {q}"),
            CircuitError::QubitOutOfRange { qubit, num_qubits } => {
                write!(
                    f,
                    "qubit {qubit} out of range for {num_qubits}-qubit circuit"
                )
            }
            CircuitError::MatrixSize { rows, cols, qubits } => {
                write!(f, "{rows}x{cols} matrix does not fit {qubits} qubit(s)")
            }
            CircuitError::UnserializableGate => {
                write!(
                    f,
                    "raw-matrix gates cannot be serialized to the text format"
                )
            }
            CircuitError::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

/// Parse failure with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub error: CircuitError,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    Rx,
    Rz,
    Cnot,
    Cz,
    Rzz,
    Swap,
    /// Arbitrary dense matrix; not required to be unitary (decomposition
    /// factors such as projectors use this).
    Unitary,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Rx => "rx",
            GateKind::Rz => "rz",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::Rzz => "rzz",
            GateKind::Swap => "swap",
            GateKind::Unitary => "u",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        Some(match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "rx" => GateKind::Rx,
            "rz" => GateKind::Rz,
            "cnot" | "cx" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "rzz" => GateKind::Rzz,
            "swap" => GateKind::Swap,
            _ => return None,
        })
    }

    /// (parameter count, qubit count) for library gates.
    fn arity(self) -> (usize, usize) {
        match self {
            GateKind::H | GateKind::X | GateKind::Y | GateKind::Z => (0, 1),
            GateKind::Rx | GateKind::Rz => (1, 1),
            GateKind::Cnot | GateKind::Cz | GateKind::Swap => (0, 2),
            GateKind::Rzz => (1, 2),
            GateKind::Unitary => (0, 0),
        }
    }

    /// Diagonal in the computational basis (for the commutation fast path).
    pub fn is_diagonal_family(self) -> bool {
        matches!(
            self,
            GateKind::Z | GateKind::Rz | GateKind::Cz | GateKind::Rzz
        )
    }
}

/// A gate: named kind, real parameters, ordered targets, and the realized
/// dense matrix. The matrix is the source of truth for all numerics.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    params: Vec<f64>,
    qubits: Vec<Qubit>,
    matrix: CMatrix,
}

impl Gate {
    /// Build a library gate from its name, parameters, and targets.
    pub fn build(kind: GateKind, params: &[f64], qubits: &[Qubit]) -> Result<Gate, CircuitError> {
        if kind == GateKind::Unitary {
            return Err(CircuitError::UnknownGate(
                "u requires an explicit matrix".to_string(),
            ));
        }
        let (n_params, n_qubits) = kind.arity();
        if params.len() != n_params {
            return Err(CircuitError::ParamCount {
                gate: kind.name(),
                expected: n_params,
                got: params.len(),
            });
        }
        if qubits.len() != n_qubits {
            return Err(CircuitError::QubitCount {
                gate: kind.name(),
                expected: n_qubits,
                got: qubits.len(),
            });
        }
        check_distinct(qubits)?;
        let matrix = library_matrix(kind, params);
        Ok(Gate {
            kind,
            params: params.to_vec(),
            qubits: qubits.to_vec(),
            matrix,
        })
    }

    /// Wrap an arbitrary dense matrix as a gate on the given targets.
    pub fn from_matrix(matrix: CMatrix, qubits: &[Qubit]) -> Result<Gate, CircuitError> {
        if qubits.is_empty() {
            return Err(CircuitError::QubitCount {
                gate: "u",
                expected: 1,
                got: 0,
            });
        }
        let dim = 1usize << qubits.len();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(CircuitError::MatrixSize {
                rows: matrix.rows(),
                cols: matrix.cols(),
                qubits: qubits.len(),
            });
        }
        check_distinct(qubits)?;
        Ok(Gate {
            kind: GateKind::Unitary,
            params: Vec::new(),
            qubits: qubits.to_vec(),
            matrix,
        })
    }

    pub fn h(q: Qubit) -> Gate {
        Gate::build(GateKind::H, &[], &[q]).unwrap()
    }

    pub fn x(q: Qubit) -> Gate {
        Gate::build(GateKind::X, &[], &[q]).unwrap()
    }

    pub fn rx(theta: f64, q: Qubit) -> Gate {
        Gate::build(GateKind::Rx, &[theta], &[q]).unwrap()
    }

    pub fn rz(theta: f64, q: Qubit) -> Gate {
        Gate::build(GateKind::Rz, &[theta], &[q]).unwrap()
    }

    pub fn cnot(control: Qubit, target: Qubit) -> Gate {
        Gate::build(GateKind::Cnot, &[], &[control, target]).unwrap()
    }

    pub fn cz(a: Qubit, b: Qubit) -> Gate {
        Gate::build(GateKind::Cz, &[], &[a, b]).unwrap()
    }

    pub fn rzz(theta: f64, a: Qubit, b: Qubit) -> Gate {
        Gate::build(GateKind::Rzz, &[theta], &[a, b]).unwrap()
    }

    pub fn swap(a: Qubit, b: Qubit) -> Gate {
        Gate::build(GateKind::Swap, &[], &[a, b]).unwrap()
    }

    #[inline]
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    #[inline]
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    #[inline]
    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.kind.is_diagonal_family()
            || (self.kind == GateKind::Unitary && self.matrix.is_diagonal(1e-14))
    }
}

fn check_distinct(qubits: &[Qubit]) -> Result<(), CircuitError> {
    for (i, &q) in qubits.iter().enumerate() {
        if qubits[..i].contains(&q) {
            return Err(CircuitError::DuplicateQubit(q));
        }
    }
    Ok(())
}

fn library_matrix(kind: GateKind, params: &[f64]) -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    match kind {
        GateKind::H => {
            let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
            CMatrix::from_rows(2, 2, &[s, s, s, -s])
        }
        GateKind::X => CMatrix::from_rows(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO]),
        GateKind::Y => CMatrix::from_rows(2, 2, &[C_ZERO, -i, i, C_ZERO]),
        GateKind::Z => CMatrix::from_diag(&[C_ONE, -C_ONE]),
        GateKind::Rx => {
            let half = params[0] / 2.0;
            let c = Complex64::new(half.cos(), 0.0);
            let ms = -i * half.sin();
            CMatrix::from_rows(2, 2, &[c, ms, ms, c])
        }
        GateKind::Rz => {
            let half = params[0] / 2.0;
            CMatrix::from_diag(&[(-i * half).exp(), (i * half).exp()])
        }
        GateKind::Cnot => CMatrix::from_rows(
            4,
            4,
            &[
                C_ONE, C_ZERO, C_ZERO, C_ZERO, C_ZERO, C_ONE, C_ZERO, C_ZERO, C_ZERO, C_ZERO,
                C_ZERO, C_ONE, C_ZERO, C_ZERO, C_ONE, C_ZERO,
            ],
        ),
        GateKind::Cz => CMatrix::from_diag(&[C_ONE, C_ONE, C_ONE, -C_ONE]),
        GateKind::Rzz => {
            // exp(-i θ/2 Z⊗Z): phase e^{-iθ/2} where the two bits agree.
            let half = params[0] / 2.0;
            let lo = (-i * half).exp();
            let hi = (i * half).exp();
            CMatrix::from_diag(&[lo, hi, hi, lo])
        }
        GateKind::Swap => CMatrix::from_rows(
            4,
            4,
            &[
                C_ONE, C_ZERO, C_ZERO, C_ZERO, C_ZERO, C_ZERO, C_ONE, C_ZERO, C_ZERO, C_ONE,
                C_ZERO, C_ZERO, C_ZERO, C_ZERO, C_ZERO, C_ONE,
            ],
        ),
        GateKind::Unitary => unreachable!("raw matrices come in via Gate::from_matrix"),
    }
}

/// Ordered gate list over a fixed register; application order is list order.
/// Immutable once built, so plans and paths may share it freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        for &q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Register bipartition: the cut lies between qubit `boundary` and
/// `boundary + 1`, so the low partition holds qubits `0..=boundary`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSpec {
    boundary: Qubit,
}

impl CutSpec {
    pub fn new(boundary: Qubit) -> CutSpec {
        CutSpec { boundary }
    }

    /// Boundary label `l`; valid cuts satisfy `0 <= l < n-1`.
    #[inline]
    pub fn boundary(&self) -> Qubit {
        self.boundary
    }

    /// Low-partition qubit count `n_b = l + 1`.
    #[inline]
    pub fn n_low(&self) -> usize {
        self.boundary + 1
    }

    /// High-partition qubit count `n_a = n - n_b`.
    #[inline]
    pub fn n_high(&self, num_qubits: usize) -> usize {
        num_qubits - self.n_low()
    }

    #[inline]
    pub fn is_low(&self, q: Qubit) -> bool {
        q <= self.boundary
    }

    pub fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        if num_qubits < 2 || self.boundary >= num_qubits - 1 {
            return Err(CircuitError::Malformed(format!(
                "cut boundary {} invalid for {} qubit(s)",
                self.boundary, num_qubits
            )));
        }
        Ok(())
    }
}

/// Which side(s) of a cut a gate touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateRegion {
    LocalLow,
    LocalHigh,
    Crossing,
}

/// Total and exhaustive: every gate is local to one partition or crossing.
pub fn classify_gate(gate: &Gate, cut: &CutSpec) -> GateRegion {
    let low = gate.qubits().iter().any(|&q| cut.is_low(q));
    let high = gate.qubits().iter().any(|&q| !cut.is_low(q));
    match (low, high) {
        (true, false) => GateRegion::LocalLow,
        (false, true) => GateRegion::LocalHigh,
        _ => GateRegion::Crossing,
    }
}

/// Apply one gate to a statevector in place.
pub fn apply_gate(state: &mut Statevector, gate: &Gate) -> Result<(), LinalgError> {
    state.apply_matrix(gate.matrix(), gate.qubits())
}

/// Parse the line-based circuit format: `qubits <n>` followed by one gate
/// per line (`<name> [<param>...] <qubit>...`), `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |error: CircuitError| ParseError {
            line: line_no,
            error,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match &mut circuit {
            None => {
                if tokens.len() != 2 || !tokens[0].eq_ignore_ascii_case("qubits") {
                    return Err(err(CircuitError::Malformed(
                        "expected header `qubits <n>`".to_string(),
                    )));
                }
                let n: usize = tokens[1].parse().map_err(|_| {
                    err(CircuitError::Malformed(format!(
                        "bad qubit count `{}`",
                        tokens[1]
                    )))
                })?;
                circuit = Some(Circuit::new(n));
            }
            Some(c) => {
                let name = tokens[0].to_ascii_lowercase();
                let kind = GateKind::from_name(&name)
                    .ok_or_else(|| err(CircuitError::UnknownGate(name.clone())))?;
                let (n_params, n_qubits) = kind.arity();
                if tokens.len() != 1 + n_params + n_qubits {
                    return Err(err(CircuitError::Malformed(format!(
                        "gate `{name}` expects {n_params} parameter(s) and {n_qubits} qubit(s)"
                    ))));
                }
                let mut params = Vec::with_capacity(n_params);
                for tok in &tokens[1..1 + n_params] {
                    params.push(tok.parse::<f64>().map_err(|_| {
                        err(CircuitError::Malformed(format!("bad parameter `{tok}`")))
                    })?);
                }
                let mut qubits = Vec::with_capacity(n_qubits);
                for tok in &tokens[1 + n_params..] {
                    qubits.push(tok.parse::<usize>().map_err(|_| {
                        err(CircuitError::Malformed(format!("bad qubit index `{tok}`")))
                    })?);
                }
                let gate = Gate::build(kind, &params, &qubits).map_err(err)?;
                c.push(gate).map_err(err)?;
            }
        }
    }
    circuit.ok_or(ParseError {
        line: 0,
        error: CircuitError::Malformed("empty circuit file".to_string()),
    })
}

/// Render a circuit in the text format; inverse of `parse_circuit` up to
/// whitespace normalization. Raw-matrix gates are rejected.
pub fn serialize_circuit(circuit: &Circuit) -> Result<String, CircuitError> {
    let mut out = format!("qubits {}\n", circuit.num_qubits());
    for gate in circuit.gates() {
        if gate.kind() == GateKind::Unitary {
            return Err(CircuitError::UnserializableGate);
        }
        out.push_str(gate.kind().name());
        for p in gate.params() {
            out.push_str(&format!(" {p}"));
        }
        for q in gate.qubits() {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
    }
    Ok(out)
}
