//! Position-state encoding of qubits: one boson per two-site column, row 0
//! for |0> and row 1 for |1>, plus validity and leakage diagnostics.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState, VertexId};
use crate::graph::GraphConfig;
use crate::hamiltonian::build_hamiltonian;
use crate::state::StateVector;

/// Default tolerance for computational-validity checks.
pub const VALIDITY_TOL: f64 = 1e-8;

/// Bijection between n-qubit computational labels and single-occupancy Fock
/// states. Labels are big-endian bit strings, qubit 1 leftmost.
#[derive(Debug, Clone)]
pub struct EncodingMap {
    basis: Arc<FockBasis>,
    qubit_count: usize,
    /// Fock index of each label, ordered by label value (|0..0>, |0..1>, ...).
    support: Vec<usize>,
    in_support: Vec<bool>,
}

impl EncodingMap {
    pub fn new(basis: Arc<FockBasis>) -> Result<Self> {
        let sites = basis.site_count();
        if !sites.is_multiple_of(2) {
            return Err(Error::InvalidGraph(format!(
                "encoding needs an even site count, got {sites}"
            )));
        }
        let qubit_count = sites / 2;
        if basis.particle_count() != qubit_count {
            return Err(Error::DimensionMismatch {
                expected: qubit_count,
                got: basis.particle_count(),
            });
        }
        let mut support = Vec::with_capacity(1 << qubit_count);
        for value in 0..(1usize << qubit_count) {
            let mut occ = vec![0u8; sites];
            for q in 1..=qubit_count {
                let bit = (value >> (qubit_count - q)) & 1;
                occ[VertexId::new(q, bit as u8).index()] = 1;
            }
            let ix = basis
                .index_of(&FockState::new(occ))
                .expect("single-occupancy state must be in the basis");
            support.push(ix);
        }
        let mut in_support = vec![false; basis.dim()];
        for &ix in &support {
            in_support[ix] = true;
        }
        Ok(EncodingMap {
            basis,
            qubit_count,
            support,
            in_support,
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Fock indices of the 2^n encoded states, ordered by label value.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Fock index for a label value in 0..2^n.
    pub fn fock_index(&self, label_value: usize) -> usize {
        self.support[label_value]
    }

    /// Parse a big-endian bit-string label into its value.
    pub fn label_value(&self, label: &str) -> Result<usize> {
        if label.len() != self.qubit_count {
            return Err(Error::LabelLength {
                expected: self.qubit_count,
                got: label.len(),
            });
        }
        let mut value = 0usize;
        for ch in label.chars() {
            value <<= 1;
            match ch {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(Error::LabelDigit(label.to_string())),
            }
        }
        Ok(value)
    }

    /// Render a label value as a bit string.
    pub fn label_string(&self, value: usize) -> String {
        (0..self.qubit_count)
            .map(|q| {
                if (value >> (self.qubit_count - 1 - q)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// Unit vector on the Fock state encoding `label`.
    pub fn encode(&self, label: &str) -> Result<StateVector> {
        let value = self.label_value(label)?;
        StateVector::basis_state(Arc::clone(&self.basis), self.support[value])
    }

    /// True iff the amplitude mass outside the encoded support is below
    /// `tol`.
    pub fn is_computational(&self, psi: &StateVector, tol: f64) -> bool {
        self.leakage(psi) < tol
    }

    /// Amplitude mass outside the encoded support, summed directly over the
    /// non-encoded basis states; exactly 0 when nothing lies outside.
    pub fn leakage(&self, psi: &StateVector) -> f64 {
        (0..psi.dim())
            .filter(|&ix| !self.in_support[ix])
            .map(|ix| psi.amplitude(ix).norm_sqr())
            .sum()
    }

    /// Amplitudes on the 2^n encoded states keyed by label, plus leakage.
    pub fn decode(&self, psi: &StateVector) -> (BTreeMap<String, Complex64>, f64) {
        let mut amplitudes = BTreeMap::new();
        for value in 0..self.support.len() {
            amplitudes.insert(self.label_string(value), psi.amplitude(self.support[value]));
        }
        (amplitudes, self.leakage(psi))
    }

    /// Decoded amplitudes as a dense vector ordered by label value.
    pub fn decode_vector(&self, psi: &StateVector) -> Vec<Complex64> {
        self.support.iter().map(|&ix| psi.amplitude(ix)).collect()
    }
}

/// Fock states outside the encoded support that share a connected component
/// with it under at least one of the given configurations. This is the set
/// of non-computational states the configurations can populate starting
/// from an encoded state.
pub fn coupled_noncomputational(
    basis: &FockBasis,
    enc: &EncodingMap,
    configs: &[GraphConfig],
) -> Result<BTreeSet<usize>> {
    let mut coupled = BTreeSet::new();
    let support: HashSet<usize> = enc.support().iter().copied().collect();
    for config in configs {
        let h = build_hamiltonian(basis, config)?;
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); basis.dim()];
        for &(r, c, _) in h.triplets() {
            if r != c {
                adjacency[r].push(c);
            }
        }
        let mut seen = vec![false; basis.dim()];
        let mut stack: Vec<usize> = enc.support().to_vec();
        for &s in enc.support() {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        for (ix, &reached) in seen.iter().enumerate() {
            if reached && !support.contains(&ix) {
                coupled.insert(ix);
            }
        }
    }
    Ok(coupled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::default_config;
    use nalgebra::DVector;

    fn enc_for(n: usize) -> EncodingMap {
        let basis = FockBasis::enumerate(n, 2 * n).unwrap();
        EncodingMap::new(basis).unwrap()
    }

    #[test]
    fn canonical_two_qubit_labels() {
        let enc = enc_for(2);
        let occ = |label: &str| {
            let psi = enc.encode(label).unwrap();
            let ix = (0..psi.dim())
                .find(|&i| psi.amplitude(i).norm() > 0.5)
                .unwrap();
            enc.basis().state(ix).occupations().to_vec()
        };
        assert_eq!(occ("00"), vec![1, 0, 1, 0]);
        assert_eq!(occ("01"), vec![1, 0, 0, 1]);
        assert_eq!(occ("10"), vec![0, 1, 1, 0]);
        assert_eq!(occ("11"), vec![0, 1, 0, 1]);
    }

    #[test]
    fn single_qubit_one_maps_to_row_one() {
        let enc = enc_for(1);
        let psi = enc.encode("1").unwrap();
        let ix = enc.basis().index_of(&FockState::new(vec![0, 1])).unwrap();
        assert!((psi.amplitude(ix) - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn decode_inverts_encode_with_zero_leakage() {
        for n in 1..=5 {
            let enc = enc_for(n);
            for value in 0..(1usize << n) {
                let label = enc.label_string(value);
                let (amps, leak) = enc.decode(&enc.encode(&label).unwrap());
                assert_eq!(leak, 0.0);
                for (k, v) in &amps {
                    let expect = if *k == label { 1.0 } else { 0.0 };
                    assert!((v.norm() - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn wrong_label_length_is_rejected() {
        let enc = enc_for(2);
        assert!(matches!(enc.encode("011"), Err(Error::LabelLength { .. })));
        assert!(matches!(enc.encode("0x"), Err(Error::LabelDigit(_))));
    }

    #[test]
    fn superposition_with_invalid_component_fails_validity() {
        let enc = enc_for(2);
        let basis = enc.basis();
        // |1100>: both bosons in column 1 -- no computational interpretation.
        let weight = Complex64::from(0.5_f64.sqrt());
        let mut amps = DVector::zeros(basis.dim());
        amps[basis.index_of(&FockState::new(vec![1, 1, 0, 0])).unwrap()] = weight;
        amps[basis.index_of(&FockState::new(vec![1, 0, 1, 0])).unwrap()] = weight;
        let psi = StateVector::new(Arc::clone(basis), amps).unwrap();
        assert!(!enc.is_computational(&psi, 0.1));
        let (amp_map, leak) = enc.decode(&psi);
        assert!((leak - 0.5).abs() < 1e-12);
        assert!((amp_map["00"].norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn doublon_state_is_invalid() {
        let enc = enc_for(2);
        let ix = enc
            .basis()
            .index_of(&FockState::new(vec![2, 0, 0, 0]))
            .unwrap();
        let psi = StateVector::basis_state(Arc::clone(enc.basis()), ix).unwrap();
        assert!(!enc.is_computational(&psi, VALIDITY_TOL));
    }

    #[test]
    fn encoded_states_are_annihilated_by_the_idle_hamiltonian() {
        for n in 1..=4 {
            let enc = enc_for(n);
            let h = build_hamiltonian(enc.basis(), &default_config(n, 1.7)).unwrap();
            for value in 0..(1usize << n) {
                let psi = enc.encode(&enc.label_string(value)).unwrap();
                assert_eq!(h.matvec(psi.amplitudes()).norm(), 0.0);
            }
        }
    }

    #[test]
    fn entangler_leaks_mid_pulse() {
        // A quarter of the way through the m = 6, k = 2 pulse the |11>
        // input has most of its weight on doubly-occupied states.
        let u = 20.0_f64.sqrt();
        let enc = enc_for(2);
        let spec = crate::gates::cphase_gate(1, 6, 2, u).unwrap();
        let config = spec.to_config(2, u).unwrap();
        let h = build_hamiltonian(enc.basis(), &config).unwrap();
        let psi =
            crate::evolve::evolve(&h, &enc.encode("11").unwrap(), spec.duration / 4.0).unwrap();
        let (_, leak) = enc.decode(&psi);
        assert!(leak > 0.1, "mid-pulse leakage {leak}");
        assert!(!enc.is_computational(&psi, VALIDITY_TOL));
    }

    #[test]
    fn two_qubit_pulses_couple_twenty_four_states_at_three_qubits() {
        // The union over all adjacent entangling pulses of the states their
        // components attach to the encoded subspace: 12 from each pair of
        // columns via the double-edge pulse (which subsumes the single-edge
        // one), disjoint between the two pairs.
        let u = 2.0;
        let enc = enc_for(3);
        let mut configs = Vec::new();
        for q in 1..=2 {
            configs.push(
                crate::gates::cphase_gate(q, 6, 2, u)
                    .unwrap()
                    .to_config(3, u)
                    .unwrap(),
            );
            configs.push(
                crate::gates::swap_gate(q, 1, 5, u)
                    .unwrap()
                    .to_config(3, u)
                    .unwrap(),
            );
        }
        let coupled = coupled_noncomputational(enc.basis(), &enc, &configs).unwrap();
        assert_eq!(coupled.len(), 24);

        // The single-edge pulse alone reaches 8 of them per pair.
        let single = coupled_noncomputational(enc.basis(), &enc, &configs[..1]).unwrap();
        assert_eq!(single.len(), 8);
    }
}
