//! Compilation of abstract circuits into ordered pulse schedules, and the
//! end-to-end simulation drive.
//!
//! Gates with disjoint lattice support share a layer and finish together:
//! single-qubit pulses rescale their couplings to the layer duration, while
//! interaction-constrained pulses pin it. Two such pulses share a layer
//! only when their required durations already agree.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitGate};
use crate::encoding::EncodingMap;
use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::fock::FockBasis;
use crate::gates::{self, GateSpec};
use crate::graph::GraphConfig;
use crate::hamiltonian::build_hamiltonian;
use crate::state::StateVector;

/// Tolerance for treating two interaction-pinned durations as equal.
pub const DURATION_MATCH_TOL: f64 = 1e-12;

/// Layer-formation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Pack gates left to right into the earliest compatible layer.
    GreedyLayer,
    /// One gate per layer.
    Sequential,
}

impl std::str::FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy-layer" => Ok(Policy::GreedyLayer),
            "sequential" => Ok(Policy::Sequential),
            other => Err(Error::BadDocument(format!("unknown policy {other:?}"))),
        }
    }
}

/// A gate resolved into a pulse, with provenance back to the circuit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduledGate {
    pub circuit_index: usize,
    pub spec: GateSpec,
}

/// One lattice configuration held for a fixed duration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulseStep {
    pub config: GraphConfig,
    pub duration: f64,
    pub gates: Vec<ScheduledGate>,
}

/// An ordered pulse sequence for an n-qubit lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Schedule {
    pub qubit_count: usize,
    pub interaction: f64,
    pub steps: Vec<PulseStep>,
}

struct LayerDraft {
    gates: Vec<(usize, GateSpec)>,
    pinned_duration: Option<f64>,
    support: Vec<usize>,
}

/// Resolve one abstract gate against the reference couplings. Identity and
/// zero-angle rotations compile to nothing.
fn resolve_gate(gate: &CircuitGate, interaction: f64) -> Result<Option<GateSpec>> {
    let reference = interaction;
    let spec = match *gate {
        CircuitGate::Identity { .. } => None,
        CircuitGate::Rx { qubit, theta } => {
            if theta == 0.0 {
                None
            } else {
                Some(gates::rx_gate(qubit, theta, reference)?)
            }
        }
        CircuitGate::Rz { qubit, theta } => {
            if theta == 0.0 {
                None
            } else {
                Some(gates::rz_gate(qubit, theta, reference)?)
            }
        }
        CircuitGate::Hadamard { qubit } => Some(gates::hadamard_gate(qubit, reference)?),
        CircuitGate::Cphase { qubits, m, k } => {
            Some(gates::cphase_gate(qubits[0], m, k, interaction)?)
        }
        CircuitGate::Swap { qubits, k, l } => Some(gates::swap_gate(qubits[0], k, l, interaction)?),
    };
    Ok(spec)
}

/// Compile a circuit into a schedule for the given global interaction.
pub fn compile(circuit: &Circuit, interaction: f64, policy: Policy) -> Result<Schedule> {
    circuit.validate()?;
    if !interaction.is_finite() || interaction <= 0.0 {
        return Err(Error::GateConstraint(format!(
            "interaction must be positive, got {interaction}"
        )));
    }

    let mut layers: Vec<LayerDraft> = Vec::new();
    let mut last_layer: Vec<isize> = vec![-1; circuit.qubit_count + 1];

    for (index, gate) in circuit.gates.iter().enumerate() {
        let Some(spec) = resolve_gate(gate, interaction)? else {
            continue;
        };
        let pinned = spec.is_interaction_constrained().then_some(spec.duration);

        let mut layer_ix = match policy {
            Policy::Sequential => layers.len(),
            Policy::GreedyLayer => {
                let earliest = spec
                    .qubits
                    .iter()
                    .map(|&q| last_layer[q] + 1)
                    .max()
                    .unwrap_or(0) as usize;
                let mut ix = earliest;
                // Interaction-pinned pulses whose durations disagree are
                // split into successive layers.
                while ix < layers.len() {
                    let compatible = match (pinned, layers[ix].pinned_duration) {
                        (Some(a), Some(b)) => (a - b).abs() <= DURATION_MATCH_TOL,
                        _ => true,
                    };
                    if compatible {
                        break;
                    }
                    ix += 1;
                }
                ix
            }
        };
        if layer_ix >= layers.len() {
            layer_ix = layers.len();
            layers.push(LayerDraft {
                gates: Vec::new(),
                pinned_duration: None,
                support: Vec::new(),
            });
        }

        let layer = &mut layers[layer_ix];
        debug_assert!(spec
            .support_sites()
            .iter()
            .all(|s| !layer.support.contains(s)));
        layer.support.extend(spec.support_sites());
        if let Some(t) = pinned {
            layer.pinned_duration.get_or_insert(t);
        }
        for &q in &spec.qubits {
            last_layer[q] = layer_ix as isize;
        }
        layer.gates.push((index, spec));
    }

    let mut steps = Vec::with_capacity(layers.len());
    for layer in layers {
        let duration = layer.pinned_duration.unwrap_or_else(|| {
            layer
                .gates
                .iter()
                .map(|(_, s)| s.duration)
                .fold(0.0, f64::max)
        });

        let mut config = GraphConfig::disconnected(2 * circuit.qubit_count, interaction);
        let mut gates = Vec::with_capacity(layer.gates.len());
        for (circuit_index, spec) in layer.gates {
            let spec = if spec.is_interaction_constrained()
                || (spec.duration - duration).abs() <= DURATION_MATCH_TOL
            {
                spec
            } else {
                spec.with_duration(duration)?
            };
            for (a, b, j) in spec.edges() {
                config.add_edge(a, b, j)?;
            }
            for (v, amount) in spec.potentials() {
                config.add_potential(v, amount)?;
            }
            gates.push(ScheduledGate {
                circuit_index,
                spec,
            });
        }
        steps.push(PulseStep {
            config,
            duration,
            gates,
        });
    }

    Ok(Schedule {
        qubit_count: circuit.qubit_count,
        interaction,
        steps,
    })
}

/// Apply a schedule to an initial state, step by step.
pub fn run(schedule: &Schedule, initial: &StateVector) -> Result<StateVector> {
    let mut state = initial.clone();
    for step in &schedule.steps {
        let h = build_hamiltonian(state.basis(), &step.config)?;
        state = Propagator::new(&h)?.apply(&state, step.duration)?;
    }
    Ok(state)
}

/// Like [`run`], also reporting the leakage outside the computational
/// subspace after each completed step.
pub fn run_with_leakage(
    schedule: &Schedule,
    initial: &StateVector,
    enc: &EncodingMap,
) -> Result<(StateVector, Vec<f64>)> {
    let mut state = initial.clone();
    let mut leakages = Vec::with_capacity(schedule.steps.len());
    for step in &schedule.steps {
        let h = build_hamiltonian(state.basis(), &step.config)?;
        state = Propagator::new(&h)?.apply(&state, step.duration)?;
        leakages.push(enc.leakage(&state));
    }
    Ok((state, leakages))
}

/// Worst-case leakage over all encoded basis inputs when a gate pulse is
/// held for each fraction of its designated duration.
pub fn timing_sweep(
    spec: &GateSpec,
    fractions: &[f64],
    interaction: f64,
) -> Result<Vec<(f64, f64)>> {
    for &f in fractions {
        if !(f > 0.0 && f <= 2.0) {
            return Err(Error::FractionOutOfRange(f));
        }
    }
    let spec = spec.minimal();
    let n = spec.minimal_qubits();
    let basis = FockBasis::enumerate(n, 2 * n)?;
    let enc = EncodingMap::new(std::sync::Arc::clone(&basis))?;
    let config = spec.to_config(n, interaction)?;
    let h = build_hamiltonian(&basis, &config)?;
    let prop = Propagator::new(&h)?;

    let mut out = Vec::with_capacity(fractions.len());
    for &f in fractions {
        let t = f * spec.duration;
        let mut worst: f64 = 0.0;
        for value in 0..(1usize << n) {
            let psi =
                StateVector::basis_state(std::sync::Arc::clone(&basis), enc.fock_index(value))?;
            let evolved = prop.apply(&psi, t)?;
            worst = worst.max(enc.leakage(&evolved));
        }
        out.push((f, worst));
    }
    Ok(out)
}
