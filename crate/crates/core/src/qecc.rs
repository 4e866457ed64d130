//! Three-dimensional lattice layouts for seven-qubit-code logical qubits,
//! with an optional ancilla region for syndrome readout.
//!
//! Each logical qubit occupies seven physical-qubit columns along the code
//! dimension. In the ancilla region the |0>/|1> rows are stacked in
//! reverse, so the two |1> rows face each other and a single vertical edge
//! realizes the entangling gate between a data qubit and its ancilla.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitGate};
use crate::error::{Error, Result};

/// Code positions per logical qubit.
pub const CODE_LENGTH: usize = 7;

/// Steane-code stabilizer supports (1-based code positions); X- and Z-type
/// generators share them.
pub const STABILIZER_SUPPORTS: [[usize; 4]; 3] = [[4, 5, 6, 7], [2, 3, 6, 7], [1, 3, 5, 7]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutMode {
    LogicalOnly,
    WithAncilla,
}

impl std::str::FromStr for LayoutMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logical-only" => Ok(LayoutMode::LogicalOnly),
            "with-ancilla" => Ok(LayoutMode::WithAncilla),
            other => Err(Error::BadDocument(format!("unknown layout mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Logical,
    Ancilla,
}

/// One lattice site of the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QeccVertex {
    pub region: Region,
    /// 1-based logical-qubit index.
    pub logical: usize,
    /// 1-based code position.
    pub position: usize,
    /// Encoded row: 0 or 1.
    pub row: u8,
    /// Stacking row in the four-row visualization; the ancilla region is
    /// reversed so its |1> row sits next to the logical |1> row.
    pub grid_row: u8,
}

/// Physical-qubit layout for `logical_count` encoded logical qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QeccLayout {
    pub logical_count: usize,
    pub mode: LayoutMode,
    pub vertices: Vec<QeccVertex>,
    /// Qubit pairs adjacent along the code dimension (two-qubit gate edges).
    pub code_edges: Vec<(usize, usize)>,
    /// (data qubit, ancilla qubit) pairs joined through their |1> sites.
    pub cphase_edges: Vec<(usize, usize)>,
}

/// Logical operations the layout compiles to physical pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "kebab-case")]
pub enum LogicalGate {
    TransversalX {
        logical: usize,
        region: Region,
    },
    TransversalZ {
        logical: usize,
        region: Region,
    },
    TransversalH {
        logical: usize,
        region: Region,
    },
    EntangleAncilla {
        logical: usize,
        position: usize,
        m: u32,
        k: u32,
    },
}

/// Build the layout: 2 x 7 x n sites, or 4 x 7 x n with the ancilla region.
pub fn build_layout(logical_count: usize, mode: LayoutMode) -> QeccLayout {
    assert!(logical_count >= 1);
    let regions: &[Region] = match mode {
        LayoutMode::LogicalOnly => &[Region::Logical],
        LayoutMode::WithAncilla => &[Region::Logical, Region::Ancilla],
    };

    let mut vertices = Vec::new();
    for &region in regions {
        for logical in 1..=logical_count {
            for position in 1..=CODE_LENGTH {
                for row in 0..2u8 {
                    let grid_row = match region {
                        Region::Logical => row,
                        Region::Ancilla => 3 - row,
                    };
                    vertices.push(QeccVertex {
                        region,
                        logical,
                        position,
                        row,
                        grid_row,
                    });
                }
            }
        }
    }

    let mut layout = QeccLayout {
        logical_count,
        mode,
        vertices,
        code_edges: Vec::new(),
        cphase_edges: Vec::new(),
    };

    for &region in regions {
        for logical in 1..=logical_count {
            for position in 1..CODE_LENGTH {
                layout.code_edges.push((
                    layout.qubit_index(region, logical, position),
                    layout.qubit_index(region, logical, position + 1),
                ));
            }
        }
    }
    if mode == LayoutMode::WithAncilla {
        for logical in 1..=logical_count {
            for position in 1..=CODE_LENGTH {
                layout.cphase_edges.push((
                    layout.qubit_index(Region::Logical, logical, position),
                    layout.qubit_index(Region::Ancilla, logical, position),
                ));
            }
        }
    }
    layout
}

impl QeccLayout {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.vertices.len() / 2
    }

    /// 1-based physical-qubit index of (region, logical, position). The
    /// logical region comes first, ordered by (logical, position).
    pub fn qubit_index(&self, region: Region, logical: usize, position: usize) -> usize {
        debug_assert!((1..=self.logical_count).contains(&logical));
        debug_assert!((1..=CODE_LENGTH).contains(&position));
        let base = match region {
            Region::Logical => 0,
            Region::Ancilla => self.logical_count * CODE_LENGTH,
        };
        base + (logical - 1) * CODE_LENGTH + position
    }

    /// True when a two-qubit gate may target the pair.
    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.code_edges
            .iter()
            .chain(self.cphase_edges.iter())
            .any(|&(x, y)| (x.min(y), x.max(y)) == key)
    }

    fn require_region(&self, region: Region) -> Result<()> {
        if region == Region::Ancilla && self.mode == LayoutMode::LogicalOnly {
            return Err(Error::UnsupportedLogicalGate(
                "this layout has no ancilla region".into(),
            ));
        }
        Ok(())
    }

    fn check_logical(&self, logical: usize) -> Result<()> {
        if logical == 0 || logical > self.logical_count {
            return Err(Error::QubitOutOfRange {
                qubit: logical,
                count: self.logical_count,
            });
        }
        Ok(())
    }

    /// Compile a logical operation to a physical circuit over this layout's
    /// qubit numbering. Transversal gates become seven parallel single-qubit
    /// pulses; the ancilla entangler is one two-qubit gate on a layout edge.
    pub fn physical_circuit(&self, gate: &LogicalGate) -> Result<Circuit> {
        let qubit_count = self.qubit_count();
        let gates = match *gate {
            LogicalGate::TransversalX { logical, region } => {
                self.check_logical(logical)?;
                self.require_region(region)?;
                (1..=CODE_LENGTH)
                    .map(|c| CircuitGate::Rx {
                        qubit: self.qubit_index(region, logical, c),
                        theta: std::f64::consts::PI,
                    })
                    .collect()
            }
            LogicalGate::TransversalZ { logical, region } => {
                self.check_logical(logical)?;
                self.require_region(region)?;
                (1..=CODE_LENGTH)
                    .map(|c| CircuitGate::Rz {
                        qubit: self.qubit_index(region, logical, c),
                        theta: std::f64::consts::PI,
                    })
                    .collect()
            }
            LogicalGate::TransversalH { logical, region } => {
                self.check_logical(logical)?;
                self.require_region(region)?;
                (1..=CODE_LENGTH)
                    .map(|c| CircuitGate::Hadamard {
                        qubit: self.qubit_index(region, logical, c),
                    })
                    .collect()
            }
            LogicalGate::EntangleAncilla {
                logical,
                position,
                m,
                k,
            } => {
                self.check_logical(logical)?;
                self.require_region(Region::Ancilla)?;
                if !(1..=CODE_LENGTH).contains(&position) {
                    return Err(Error::UnsupportedLogicalGate(format!(
                        "code position {position} outside 1..={CODE_LENGTH}"
                    )));
                }
                vec![CircuitGate::Cphase {
                    qubits: [
                        self.qubit_index(Region::Logical, logical, position),
                        self.qubit_index(Region::Ancilla, logical, position),
                    ],
                    m,
                    k,
                }]
            }
        };
        let circuit = Circuit::new(qubit_count, gates);
        circuit.validate_with(|a, b| self.are_adjacent(a, b))?;
        Ok(circuit)
    }

    /// Abstract syndrome-extraction sequence for one stabilizer generator:
    /// ancilla Hadamards, one entangler per support position, ancilla
    /// Hadamards again; X-type generators add a data-side Hadamard sandwich.
    pub fn syndrome_circuit(
        &self,
        logical: usize,
        stabilizer: usize,
        x_type: bool,
        m: u32,
        k: u32,
    ) -> Result<Circuit> {
        self.check_logical(logical)?;
        self.require_region(Region::Ancilla)?;
        if stabilizer >= STABILIZER_SUPPORTS.len() {
            return Err(Error::UnsupportedLogicalGate(format!(
                "stabilizer index {stabilizer} outside 0..{}",
                STABILIZER_SUPPORTS.len()
            )));
        }
        let support = STABILIZER_SUPPORTS[stabilizer];
        let mut gates = Vec::new();
        let data_h = |gates: &mut Vec<CircuitGate>| {
            for &c in &support {
                gates.push(CircuitGate::Hadamard {
                    qubit: self.qubit_index(Region::Logical, logical, c),
                });
            }
        };
        let ancilla_h = |gates: &mut Vec<CircuitGate>| {
            for &c in &support {
                gates.push(CircuitGate::Hadamard {
                    qubit: self.qubit_index(Region::Ancilla, logical, c),
                });
            }
        };
        if x_type {
            data_h(&mut gates);
        }
        ancilla_h(&mut gates);
        for &c in &support {
            gates.push(CircuitGate::Cphase {
                qubits: [
                    self.qubit_index(Region::Logical, logical, c),
                    self.qubit_index(Region::Ancilla, logical, c),
                ],
                m,
                k,
            });
        }
        ancilla_h(&mut gates);
        if x_type {
            data_h(&mut gates);
        }
        let circuit = Circuit::new(self.qubit_count(), gates);
        circuit.validate_with(|a, b| self.are_adjacent(a, b))?;
        Ok(circuit)
    }

    /// The physical qubits living at one code position of one logical
    /// qubit: the data qubit, plus its ancilla when present.
    pub fn position_qubits(&self, logical: usize, position: usize) -> Vec<usize> {
        let mut qubits = vec![self.qubit_index(Region::Logical, logical, position)];
        if self.mode == LayoutMode::WithAncilla {
            qubits.push(self.qubit_index(Region::Ancilla, logical, position));
        }
        qubits
    }

    /// Restrict a physical circuit to the qubits at one code position,
    /// renumbering them 1..len. Gates straddling the cut are an error;
    /// gates outside it are dropped.
    pub fn position_cut(
        &self,
        circuit: &Circuit,
        logical: usize,
        position: usize,
    ) -> Result<Circuit> {
        self.check_logical(logical)?;
        let cut = self.position_qubits(logical, position);
        let renumber = |q: usize| cut.iter().position(|&c| c == q).map(|p| p + 1);
        let mut gates = Vec::new();
        for gate in &circuit.gates {
            let targets = gate.qubits();
            let inside = targets.iter().filter(|q| cut.contains(q)).count();
            if inside == 0 {
                continue;
            }
            if inside != targets.len() {
                return Err(Error::CutStraddled(format!(
                    "gate on qubits {targets:?} crosses the cut at position {position}"
                )));
            }
            let gate = match *gate {
                CircuitGate::Rx { qubit, theta } => CircuitGate::Rx {
                    qubit: renumber(qubit).unwrap(),
                    theta,
                },
                CircuitGate::Rz { qubit, theta } => CircuitGate::Rz {
                    qubit: renumber(qubit).unwrap(),
                    theta,
                },
                CircuitGate::Hadamard { qubit } => CircuitGate::Hadamard {
                    qubit: renumber(qubit).unwrap(),
                },
                CircuitGate::Identity { qubit } => CircuitGate::Identity {
                    qubit: renumber(qubit).unwrap(),
                },
                CircuitGate::Cphase { qubits, m, k } => CircuitGate::Cphase {
                    qubits: [renumber(qubits[0]).unwrap(), renumber(qubits[1]).unwrap()],
                    m,
                    k,
                },
                CircuitGate::Swap { qubits, k, l } => CircuitGate::Swap {
                    qubits: [renumber(qubits[0]).unwrap(), renumber(qubits[1]).unwrap()],
                    k,
                    l,
                },
            };
            gates.push(gate);
        }
        Ok(Circuit::new(cut.len(), gates))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncodingMap;
    use crate::fock::FockBasis;
    use crate::gates::hadamard_matrix;
    use crate::oracle::ideal_circuit_matrix;
    use crate::schedule::{compile, run, Policy};
    use crate::state::StateVector;
    use crate::unitary::phase_aligned_distance;
    use nalgebra::DMatrix;
    use std::sync::Arc;

    #[test]
    fn vertex_counts_match_the_grid_formulas() {
        for n in 1..=4 {
            let logical = build_layout(n, LayoutMode::LogicalOnly);
            assert_eq!(logical.vertex_count(), 14 * n);
            assert_eq!(logical.qubit_count(), 7 * n);
            assert!(logical.cphase_edges.is_empty());

            let full = build_layout(n, LayoutMode::WithAncilla);
            assert_eq!(full.vertex_count(), 28 * n);
            assert_eq!(full.qubit_count(), 14 * n);
            assert_eq!(full.cphase_edges.len(), 7 * n);
        }
    }

    #[test]
    fn ancilla_rows_are_reversed() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        for v in &layout.vertices {
            match v.region {
                Region::Logical => assert_eq!(v.grid_row, v.row),
                Region::Ancilla => assert_eq!(v.grid_row, 3 - v.row),
            }
        }
        // The two middle grid rows are the |1> rows of both regions.
        let middle: Vec<_> = layout
            .vertices
            .iter()
            .filter(|v| v.grid_row == 1 || v.grid_row == 2)
            .collect();
        assert!(middle.iter().all(|v| v.row == 1));
    }

    #[test]
    fn cphase_edges_join_matching_positions() {
        let layout = build_layout(2, LayoutMode::WithAncilla);
        for &(data, ancilla) in &layout.cphase_edges {
            let dv = &layout.vertices[(data - 1) * 2];
            let av = &layout.vertices[(ancilla - 1) * 2];
            assert_eq!(dv.region, Region::Logical);
            assert_eq!(av.region, Region::Ancilla);
            assert_eq!(dv.logical, av.logical);
            assert_eq!(dv.position, av.position);
        }
    }

    #[test]
    fn per_logical_blocks_are_disjoint() {
        let layout = build_layout(2, LayoutMode::LogicalOnly);
        assert_eq!(layout.vertex_count(), 28);
        // No code edge crosses logical blocks.
        for &(a, b) in &layout.code_edges {
            let la = layout.vertices[(a - 1) * 2].logical;
            let lb = layout.vertices[(b - 1) * 2].logical;
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn transversal_x_is_seven_pi_pulses() {
        let layout = build_layout(1, LayoutMode::LogicalOnly);
        let circuit = layout
            .physical_circuit(&LogicalGate::TransversalX {
                logical: 1,
                region: Region::Logical,
            })
            .unwrap();
        assert_eq!(circuit.gates.len(), 7);
        let mut qubits: Vec<usize> = circuit.gates.iter().map(|g| g.qubits()[0]).collect();
        qubits.sort_unstable();
        assert_eq!(qubits, (1..=7).collect::<Vec<_>>());
        for g in &circuit.gates {
            assert!(matches!(g, CircuitGate::Rx { theta, .. } if *theta == std::f64::consts::PI));
        }
    }

    #[test]
    fn entangler_targets_a_layout_edge() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        let circuit = layout
            .physical_circuit(&LogicalGate::EntangleAncilla {
                logical: 1,
                position: 3,
                m: 6,
                k: 2,
            })
            .unwrap();
        assert_eq!(circuit.gates.len(), 1);
        let q = circuit.gates[0].qubits();
        assert_eq!(q, vec![3, 10]);
        assert!(layout.are_adjacent(q[0], q[1]));
    }

    #[test]
    fn every_emitted_two_qubit_gate_sits_on_a_layout_edge() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        for stab in 0..3 {
            for x_type in [false, true] {
                let c = layout.syndrome_circuit(1, stab, x_type, 6, 2).unwrap();
                for g in &c.gates {
                    let q = g.qubits();
                    if q.len() == 2 {
                        assert!(layout.are_adjacent(q[0], q[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn syndrome_circuit_shape() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        let z = layout.syndrome_circuit(1, 0, false, 6, 2).unwrap();
        // H on 4 ancillas, 4 entanglers, H on 4 ancillas.
        assert_eq!(z.gates.len(), 12);
        let x = layout.syndrome_circuit(1, 2, true, 6, 2).unwrap();
        assert_eq!(x.gates.len(), 20);
        let support: std::collections::BTreeSet<usize> =
            x.gates.iter().flat_map(|g| g.qubits()).collect();
        // Positions {1, 3, 5, 7} of both regions.
        assert_eq!(
            support,
            [1usize, 3, 5, 7, 8, 10, 12, 14].into_iter().collect()
        );
    }

    #[test]
    fn unsupported_requests_are_rejected() {
        let layout = build_layout(1, LayoutMode::LogicalOnly);
        assert!(layout
            .physical_circuit(&LogicalGate::EntangleAncilla {
                logical: 1,
                position: 1,
                m: 6,
                k: 2
            })
            .is_err());
        assert!(layout
            .physical_circuit(&LogicalGate::TransversalX {
                logical: 2,
                region: Region::Logical
            })
            .is_err());
    }

    #[test]
    fn transversal_hadamard_cut_matches_the_two_qubit_oracle() {
        // Apply transversal H to both regions; the cut at one code position
        // is a two-boson, four-site system enacting H (x) H.
        let layout = build_layout(1, LayoutMode::WithAncilla);
        let mut gates = Vec::new();
        for region in [Region::Logical, Region::Ancilla] {
            gates.extend(
                layout
                    .physical_circuit(&LogicalGate::TransversalH { logical: 1, region })
                    .unwrap()
                    .gates,
            );
        }
        let full = Circuit::new(layout.qubit_count(), gates);
        let cut = layout.position_cut(&full, 1, 4).unwrap();
        assert_eq!(cut.qubit_count, 2);
        assert_eq!(cut.gates.len(), 2);

        let u = 1.0;
        let basis = FockBasis::enumerate(2, 4).unwrap();
        let enc = EncodingMap::new(Arc::clone(&basis)).unwrap();
        let schedule = compile(&cut, u, Policy::GreedyLayer).unwrap();
        let mut simulated = DMatrix::zeros(4, 4);
        for value in 0..4 {
            let psi = StateVector::basis_state(Arc::clone(&basis), enc.fock_index(value)).unwrap();
            let out = run(&schedule, &psi).unwrap();
            assert!(enc.leakage(&out) < 1e-10);
            for (row, amp) in enc.decode_vector(&out).into_iter().enumerate() {
                simulated[(row, value)] = amp;
            }
        }
        let oracle = ideal_circuit_matrix(&cut, u).unwrap();
        assert!(phase_aligned_distance(&simulated, &oracle) < 1e-8);
        let plain = hadamard_matrix().kronecker(&hadamard_matrix());
        assert!(phase_aligned_distance(&simulated, &plain) < 1e-8);
    }

    #[test]
    fn straddling_gates_fail_the_cut() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        let circuit = Circuit::new(
            layout.qubit_count(),
            vec![CircuitGate::Cphase {
                qubits: [3, 10],
                m: 6,
                k: 2,
            }],
        );
        // Position 3 contains qubits {3, 10}: fine.
        assert!(layout.position_cut(&circuit, 1, 3).is_ok());
        // Position 4 contains {4, 11}: the gate is dropped entirely.
        let dropped = layout.position_cut(&circuit, 1, 4).unwrap();
        assert!(dropped.gates.is_empty());
        // A gate with one leg inside straddles.
        let bad = Circuit::new(
            layout.qubit_count(),
            vec![CircuitGate::Cphase {
                qubits: [3, 4],
                m: 6,
                k: 2,
            }],
        );
        assert!(matches!(
            layout.position_cut(&bad, 1, 3),
            Err(Error::CutStraddled(_))
        ));
    }

    #[test]
    fn layout_serializes_to_json() {
        let layout = build_layout(1, LayoutMode::WithAncilla);
        let text = serde_json::to_string(&layout).unwrap();
        let back: QeccLayout = serde_json::from_str(&text).unwrap();
        assert_eq!(back, layout);
    }
}
