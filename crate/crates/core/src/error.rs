//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by basis construction, Hamiltonian assembly, evolution,
/// gate synthesis, scheduling, and measurement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis dimension {required} exceeds the configured cap {cap}")]
    DimensionCap { required: usize, cap: usize },

    #[error("site index {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("qubit {qubit} out of range for {count} qubits")]
    QubitOutOfRange { qubit: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite parameter: {what}")]
    NonFinite { what: String },

    #[error("angle {theta} outside [0, 2*pi)")]
    AngleOutOfRange { theta: f64 },

    #[error("invalid gate parameters: {0}")]
    GateConstraint(String),

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("two-qubit gate targets non-adjacent qubits {a} and {b}")]
    NonAdjacentQubits { a: usize, b: usize },

    #[error("computational label has length {got}, expected {expected}")]
    LabelLength { expected: usize, got: usize },

    #[error("label {0:?} contains a character other than '0' or '1'")]
    LabelDigit(String),

    #[error("Krylov propagation failed to converge (residual {residual:.3e})")]
    KrylovNoConvergence { residual: f64 },

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("timing fraction {0} outside the supported range (0, 2]")]
    FractionOutOfRange(f64),

    #[error("graphs are not comparable: {0}")]
    GraphMismatch(String),

    #[error("unsupported logical gate: {0}")]
    UnsupportedLogicalGate(String),

    #[error("gate support straddles the requested cut: {0}")]
    CutStraddled(String),

    #[error("malformed document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
