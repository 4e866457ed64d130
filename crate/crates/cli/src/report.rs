//! JSON report documents emitted by the verification and sweep commands.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use bhwalk_core::encoding::EncodingMap;
use bhwalk_core::evolve::restrict;
use bhwalk_core::fock::FockBasis;
use bhwalk_core::gates::{mat_json, GateKind, GateSpec};
use bhwalk_core::hamiltonian::build_hamiltonian;
use bhwalk_core::unitary::{aligning_phase, max_abs_diff};
use num_complex::Complex64;

pub const REPORT_SCHEMA: &str = "bhwalk-report-v1";
pub const RUN_SCHEMA: &str = "bhwalk-run-v1";
pub const SWEEP_SCHEMA: &str = "bhwalk-sweep-v1";

/// Verification report: the pulse, its closed-form prediction, and the
/// simulated restriction to the computational subspace.
#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub gate: GateKind,
    pub qubits: Vec<usize>,
    pub tunneling: Option<f64>,
    pub potential: Option<f64>,
    pub interaction: Option<f64>,
    pub duration: f64,
    pub trivial_phase: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    pub predicted: Vec<Vec<[f64; 2]>>,
    pub simulated: Vec<Vec<[f64; 2]>>,
    pub leakage: f64,
    /// Phase aligning simulated onto predicted.
    pub aligning_phase: f64,
    /// Max-norm deviation after alignment.
    pub max_deviation: f64,
    pub tol_leak: f64,
    pub tol_op: f64,
    pub pass: bool,
}

/// Simulate a pulse on its minimal lattice and compare against the
/// closed-form prediction.
pub fn verify(
    spec: &GateSpec,
    interaction: f64,
    tol_leak: f64,
    tol_op: f64,
) -> bhwalk_core::Result<VerifyReport> {
    let minimal = spec.minimal();
    let n = minimal.minimal_qubits();
    let basis = FockBasis::enumerate(n, 2 * n)?;
    let enc = EncodingMap::new(std::sync::Arc::clone(&basis))?;
    let config = minimal.to_config(n, interaction)?;
    let h = build_hamiltonian(&basis, &config)?;
    let op = restrict(&h, minimal.duration, enc.support())?;

    let gamma = aligning_phase(&minimal.predicted, &op.matrix);
    let aligned = op.matrix.map(|x| x * Complex64::from_polar(1.0, gamma));
    let max_deviation = max_abs_diff(&minimal.predicted, &aligned);
    let pass = op.leakage < tol_leak && max_deviation < tol_op;

    Ok(VerifyReport {
        schema: REPORT_SCHEMA.to_string(),
        gate: spec.kind,
        qubits: spec.qubits.clone(),
        tunneling: spec.tunneling,
        potential: spec.potential,
        interaction: spec.interaction,
        duration: spec.duration,
        trivial_phase: spec.trivial_phase,
        classification: spec.swap_class().map(|c| c.as_str().to_string()),
        predicted: mat_json::to_rows(&minimal.predicted),
        simulated: mat_json::to_rows(&op.matrix),
        leakage: op.leakage,
        aligning_phase: gamma,
        max_deviation,
        tol_leak,
        tol_op,
        pass,
    })
}

pub fn to_json(report: &VerifyReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    text
}

/// Output of the `run` command: decoded amplitudes and leakage diagnostics.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub qubits: usize,
    pub initial: String,
    pub steps: usize,
    pub stretch: f64,
    /// Final amplitude on each computational label, as [re, im].
    pub amplitudes: BTreeMap<String, [f64; 2]>,
    pub leakage: f64,
    pub step_leakage: Vec<f64>,
    /// Probability that measuring every qubit reports at least one loss.
    pub err_probability: f64,
    pub shots: usize,
    pub seed: u64,
}

pub fn run_to_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    text
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepPoint {
    pub fraction: f64,
    pub leakage: f64,
}

/// Output of the `sweep-timing` command.
#[derive(Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: String,
    pub gate: GateKind,
    pub duration: f64,
    pub points: Vec<SweepPoint>,
}

pub fn sweep_to_json(report: &SweepReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    text
}
