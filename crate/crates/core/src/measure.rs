//! Position measurements of encoded qubits, including the loss outcome,
//! with seeded Born-rule sampling.
//!
//! Measuring qubit i distinguishes three cases by the occupations of its
//! column: a boson on the row-0 site (Zero), on the row-1 site (One), or
//! any other pattern (Err, the qubit lost to mistimed dynamics). The three
//! operators are diagonal projectors in the Fock basis and sum to the
//! identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockState, VertexId};
use crate::state::StateVector;

/// Result of measuring one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitOutcome {
    Zero,
    One,
    Err,
}

impl QubitOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            QubitOutcome::Zero => "0",
            QubitOutcome::One => "1",
            QubitOutcome::Err => "err",
        }
    }
}

/// A sampled measurement: per-qubit outcomes, the collapsed state, and the
/// probability of the realized branch.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub outcomes: Vec<QubitOutcome>,
    pub state: StateVector,
    pub probability: f64,
}

fn classify(state: &FockState, qubit: usize) -> QubitOutcome {
    let n0 = state.occupations()[VertexId::new(qubit, 0).index()];
    let n1 = state.occupations()[VertexId::new(qubit, 1).index()];
    match (n0, n1) {
        (1, 0) => QubitOutcome::Zero,
        (0, 1) => QubitOutcome::One,
        _ => QubitOutcome::Err,
    }
}

fn check_qubits(psi: &StateVector, qubits: &[usize]) -> Result<()> {
    let count = psi.basis().site_count() / 2;
    let mut seen = std::collections::HashSet::new();
    for &q in qubits {
        if q == 0 || q > count {
            return Err(Error::QubitOutOfRange { qubit: q, count });
        }
        if !seen.insert(q) {
            return Err(Error::QubitOutOfRange { qubit: q, count });
        }
    }
    Ok(())
}

/// Exact Born distribution over the 3^m outcome tuples of measuring
/// `qubits`, in deterministic (lexicographic) order. Zero-probability
/// branches are included.
pub fn outcome_probabilities(
    psi: &StateVector,
    qubits: &[usize],
) -> Result<BTreeMap<Vec<QubitOutcome>, f64>> {
    check_qubits(psi, qubits)?;
    let mut dist: BTreeMap<Vec<QubitOutcome>, f64> = BTreeMap::new();
    // Seed every tuple so the distribution is exhaustive.
    let m = qubits.len();
    for code in 0..3usize.pow(m as u32) {
        let mut tuple = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m {
            tuple.push(match rest % 3 {
                0 => QubitOutcome::Zero,
                1 => QubitOutcome::One,
                _ => QubitOutcome::Err,
            });
            rest /= 3;
        }
        tuple.reverse();
        dist.insert(tuple, 0.0);
    }
    for (ix, state) in psi.basis().states().iter().enumerate() {
        let p = psi.amplitude(ix).norm_sqr();
        if p == 0.0 {
            continue;
        }
        let tuple: Vec<QubitOutcome> = qubits.iter().map(|&q| classify(state, q)).collect();
        *dist.get_mut(&tuple).unwrap() += p;
    }
    Ok(dist)
}

/// Sample one measurement of `qubits` with the Born rule, collapse, and
/// renormalize. Sampling uses ChaCha12 keyed by `rng_seed`, so the outcome
/// is reproducible bit-for-bit across platforms.
pub fn measure_qubits(
    psi: &StateVector,
    qubits: &[usize],
    rng_seed: u64,
) -> Result<MeasurementOutcome> {
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    measure_with_rng(psi, qubits, &mut rng)
}

fn measure_with_rng(
    psi: &StateVector,
    qubits: &[usize],
    rng: &mut ChaCha12Rng,
) -> Result<MeasurementOutcome> {
    let dist = outcome_probabilities(psi, qubits)?;
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen: Option<(&Vec<QubitOutcome>, f64)> = None;
    for (tuple, &p) in &dist {
        if p == 0.0 {
            continue;
        }
        acc += p;
        if draw < acc {
            chosen = Some((tuple, p));
            break;
        }
    }
    // Guard against accumulated rounding at draw ~ 1: fall back to the last
    // positive branch.
    let (tuple, probability) = match chosen {
        Some(pair) => pair,
        None => dist
            .iter()
            .rev()
            .find(|(_, &p)| p > 0.0)
            .map(|(t, &p)| (t, p))
            .expect("a normalized state has a positive branch"),
    };

    let basis = Arc::clone(psi.basis());
    let scale = Complex64::from(1.0 / probability.sqrt());
    let mut amps = psi.amplitudes().clone();
    for (ix, state) in basis.states().iter().enumerate() {
        let matches = qubits
            .iter()
            .zip(tuple.iter())
            .all(|(&q, &o)| classify(state, q) == o);
        if matches {
            amps[ix] *= scale;
        } else {
            amps[ix] = Complex64::ZERO;
        }
    }
    Ok(MeasurementOutcome {
        outcomes: tuple.clone(),
        state: StateVector::new(basis, amps)?,
        probability,
    })
}

/// Repeatedly measure fresh copies of `psi` (independent shots), returning
/// one outcome tuple per shot. Deterministic for a given seed.
pub fn sample_shots(
    psi: &StateVector,
    qubits: &[usize],
    shots: usize,
    rng_seed: u64,
) -> Result<Vec<Vec<QubitOutcome>>> {
    let dist = outcome_probabilities(psi, qubits)?;
    let branches: Vec<(&Vec<QubitOutcome>, f64)> = dist
        .iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|(t, &p)| (t, p))
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut picked = branches.last().expect("positive branch").0;
        for (tuple, p) in &branches {
            acc += p;
            if draw < acc {
                picked = tuple;
                break;
            }
        }
        out.push(picked.clone());
    }
    Ok(out)
}

/// Render shots as CSV with a `shot` column followed by one column per
/// measured qubit.
pub fn shots_to_csv(qubits: &[usize], shots: &[Vec<QubitOutcome>]) -> String {
    let mut text = String::from("shot");
    for q in qubits {
        text.push_str(&format!(",q{q}"));
    }
    text.push('\n');
    for (i, tuple) in shots.iter().enumerate() {
        text.push_str(&i.to_string());
        for o in tuple {
            text.push(',');
            text.push_str(o.as_str());
        }
        text.push('\n');
    }
    text
}
