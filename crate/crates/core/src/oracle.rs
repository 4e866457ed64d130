//! Dense reference unitaries built from the closed-form gate matrices.
//!
//! These never touch the lattice dynamics: a circuit's reference unitary is
//! the Kronecker product chain of predicted gate matrices, and serves as
//! the independent check on compiled-and-evolved pulses.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, CircuitGate};
use crate::error::Result;
use crate::gates;

/// Closed-form matrix of one abstract gate (2x2 or 4x4).
pub fn ideal_gate_matrix(gate: &CircuitGate, interaction: f64) -> Result<DMatrix<Complex64>> {
    Ok(match *gate {
        CircuitGate::Rx { theta, .. } => gates::rx_matrix(theta),
        CircuitGate::Rz { theta, .. } => gates::rz_matrix(theta),
        CircuitGate::Hadamard { .. } => gates::hadamard_gate(1, 1.0)?.predicted,
        CircuitGate::Cphase { m, k, .. } => gates::cphase_gate(1, m, k, interaction)?.predicted,
        CircuitGate::Swap { k, l, .. } => gates::swap_gate(1, k, l, interaction)?.predicted,
        CircuitGate::Identity { .. } => DMatrix::identity(2, 2),
    })
}

/// Embed a gate matrix on its target qubits into the full 2^n space,
/// big-endian (qubit 1 is the leftmost factor).
pub fn embed(
    gate_matrix: &DMatrix<Complex64>,
    first_qubit: usize,
    qubit_count: usize,
) -> DMatrix<Complex64> {
    let spanned = gate_matrix.nrows().trailing_zeros() as usize;
    let left = 1usize << (first_qubit - 1);
    let right = 1usize << (qubit_count - (first_qubit - 1) - spanned);
    DMatrix::identity(left, left)
        .kronecker(gate_matrix)
        .kronecker(&DMatrix::identity(right, right))
}

/// The 2^n x 2^n reference unitary of a whole circuit.
pub fn ideal_circuit_matrix(circuit: &Circuit, interaction: f64) -> Result<DMatrix<Complex64>> {
    circuit.validate()?;
    let dim = 1usize << circuit.qubit_count;
    let mut total = DMatrix::identity(dim, dim);
    for gate in &circuit.gates {
        let m = ideal_gate_matrix(gate, interaction)?;
        let full = embed(&m, gate.qubits()[0], circuit.qubit_count);
        total = full * total;
    }
    Ok(total)
}
