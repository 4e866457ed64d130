//! Abstract qubit circuits over the library gate set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateKind;

/// One abstract gate. Two-qubit gates name the left qubit of an adjacent
/// pair explicitly as `qubits: [i, i+1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CircuitGate {
    Rx { qubit: usize, theta: f64 },
    Rz { qubit: usize, theta: f64 },
    Hadamard { qubit: usize },
    Cphase { qubits: [usize; 2], m: u32, k: u32 },
    Swap { qubits: [usize; 2], k: u32, l: u32 },
    Identity { qubit: usize },
}

impl CircuitGate {
    pub fn kind(&self) -> GateKind {
        match *self {
            CircuitGate::Rx { theta, .. } => GateKind::RotX { theta },
            CircuitGate::Rz { theta, .. } => GateKind::RotZ { theta },
            CircuitGate::Hadamard { .. } => GateKind::Hadamard,
            CircuitGate::Cphase { m, k, .. } => GateKind::CPhase { m, k },
            CircuitGate::Swap { k, l, .. } => GateKind::Swap { k, l },
            CircuitGate::Identity { .. } => GateKind::Identity,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CircuitGate::Rx { qubit, .. }
            | CircuitGate::Rz { qubit, .. }
            | CircuitGate::Hadamard { qubit }
            | CircuitGate::Identity { qubit } => vec![qubit],
            CircuitGate::Cphase { qubits, .. } | CircuitGate::Swap { qubits, .. } => {
                qubits.to_vec()
            }
        }
    }
}

/// An ordered gate list on `qubit_count` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub qubit_count: usize,
    pub gates: Vec<CircuitGate>,
}

impl Circuit {
    pub fn new(qubit_count: usize, gates: Vec<CircuitGate>) -> Self {
        Circuit { qubit_count, gates }
    }

    /// Validate targets and the linear-chain adjacency rule for two-qubit
    /// gates.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(|a, b| a.abs_diff(b) == 1)
    }

    /// Validate targets against a caller-supplied adjacency predicate.
    pub fn validate_with(&self, adjacent: impl Fn(usize, usize) -> bool) -> Result<()> {
        for gate in &self.gates {
            let qubits = gate.qubits();
            for &q in &qubits {
                if q == 0 || q > self.qubit_count {
                    return Err(Error::QubitOutOfRange {
                        qubit: q,
                        count: self.qubit_count,
                    });
                }
            }
            if qubits.len() == 2 && !adjacent(qubits[0], qubits[1]) {
                return Err(Error::NonAdjacentQubits {
                    a: qubits[0],
                    b: qubits[1],
                });
            }
        }
        Ok(())
    }
}
