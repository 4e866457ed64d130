//! The single-walker secondary graph induced by a Hamiltonian on the Fock
//! basis: one vertex per Fock state, one edge per nonzero coupling, with
//! self-loops carrying the diagonal energies.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::encoding::EncodingMap;
use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::graph::GraphConfig;
use crate::hamiltonian::{build_hamiltonian, SparseHermitian};

/// Weighted graph over Fock-state labels. Edges are undirected with
/// `a < b`; zero-weight couplings are omitted. The marked subset lists the
/// computational vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondaryGraph {
    pub labels: Vec<String>,
    /// (a, b, weight) with a < b, sorted.
    pub edges: Vec<(usize, usize, f64)>,
    /// (vertex, weight), sorted; only nonzero diagonals appear.
    pub self_loops: Vec<(usize, f64)>,
    /// Sorted indices of the computational vertices.
    pub computational: Vec<usize>,
}

/// Build the secondary graph of a configuration over a basis.
pub fn build_secondary(
    basis: &FockBasis,
    config: &GraphConfig,
    enc: &EncodingMap,
) -> Result<SecondaryGraph> {
    let h = build_hamiltonian(basis, config)?;
    let labels = basis.states().iter().map(|s| s.label()).collect();
    let mut edges = Vec::new();
    let mut self_loops = Vec::new();
    for &(r, c, v) in h.triplets() {
        debug_assert_eq!(v.im, 0.0);
        if r == c {
            self_loops.push((r, v.re));
        } else if r < c {
            edges.push((r, c, v.re));
        }
    }
    edges.sort_by_key(|&(a, b, _)| (a, b));
    self_loops.sort_by_key(|&(ix, _)| ix);
    let mut computational: Vec<usize> = enc.support().to_vec();
    computational.sort_unstable();
    Ok(SecondaryGraph {
        labels,
        edges,
        self_loops,
        computational,
    })
}

impl SecondaryGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Reassemble the Hamiltonian the graph encodes; the secondary walker's
    /// generator is the same matrix the primary system evolves under.
    pub fn to_hamiltonian(&self) -> SparseHermitian {
        let mut triplets = Vec::new();
        for &(a, b, w) in &self.edges {
            triplets.push((a, b, num_complex::Complex64::new(w, 0.0)));
            triplets.push((b, a, num_complex::Complex64::new(w, 0.0)));
        }
        for &(v, w) in &self.self_loops {
            triplets.push((v, v, num_complex::Complex64::new(w, 0.0)));
        }
        SparseHermitian::from_triplets(self.vertex_count(), triplets)
    }

    /// Connected components under the edge set (self-loops ignored), each
    /// sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for &(a, b, _) in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut components = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Components as sets of labels, for structural comparisons.
    pub fn component_labels(&self) -> BTreeSet<BTreeSet<String>> {
        self.components()
            .into_iter()
            .map(|comp| comp.into_iter().map(|ix| self.labels[ix].clone()).collect())
            .collect()
    }

    /// Keep only components that contain a computational vertex.
    pub fn pruned_to_computational(&self) -> SecondaryGraph {
        let marked: BTreeSet<usize> = self.computational.iter().copied().collect();
        let mut keep: Vec<usize> = self
            .components()
            .into_iter()
            .filter(|comp| comp.iter().any(|v| marked.contains(v)))
            .flatten()
            .collect();
        keep.sort_unstable();
        let remap: HashMap<usize, usize> = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        SecondaryGraph {
            labels: keep.iter().map(|&ix| self.labels[ix].clone()).collect(),
            edges: self
                .edges
                .iter()
                .filter(|(a, b, _)| remap.contains_key(a) && remap.contains_key(b))
                .map(|&(a, b, w)| (remap[&a], remap[&b], w))
                .collect(),
            self_loops: self
                .self_loops
                .iter()
                .filter(|(v, _)| remap.contains_key(v))
                .map(|&(v, w)| (remap[&v], w))
                .collect(),
            computational: self.computational.iter().map(|ix| remap[ix]).collect(),
        }
    }

    /// DOT rendering with computational vertices highlighted. Vertex and
    /// edge order follow the basis, so output is byte-deterministic.
    pub fn to_dot(&self) -> String {
        let marked: BTreeSet<usize> = self.computational.iter().copied().collect();
        let mut out = String::from("graph secondary {\n  node [shape=circle];\n");
        for (ix, label) in self.labels.iter().enumerate() {
            if marked.contains(&ix) {
                out.push_str(&format!(
                    "  \"{label}\" [style=filled, fillcolor=lightgray, shape=doublecircle];\n"
                ));
            } else {
                out.push_str(&format!("  \"{label}\";\n"));
            }
        }
        for &(a, b, w) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.labels[a], self.labels[b], w
            ));
        }
        for &(v, w) in &self.self_loops {
            out.push_str(&format!(
                "  \"{0}\" -- \"{0}\" [label=\"{1}\"];\n",
                self.labels[v], w
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of a Cartesian-product comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductCheck {
    pub matches: bool,
    /// First structural difference found, or a confirmation message.
    pub witness: String,
    /// For a match: index into `total` of each product vertex, ordered by
    /// (a-index, b-index).
    pub mapping: Option<Vec<usize>>,
}

/// Check that `total` contains the label-respecting Cartesian product of
/// `a` and `b`: product labels are concatenations, an edge in one factor
/// pairs with identity in the other, weights match exactly, and self-loop
/// weights add. The product sector must be closed in `total` (no edge
/// leaves it); `total` may carry further vertices outside the sector.
pub fn cartesian_product_check(
    total: &SecondaryGraph,
    a: &SecondaryGraph,
    b: &SecondaryGraph,
) -> Result<ProductCheck> {
    let lookup: HashMap<&str, usize> = total
        .labels
        .iter()
        .enumerate()
        .map(|(ix, l)| (l.as_str(), ix))
        .collect();

    let (na, nb) = (a.vertex_count(), b.vertex_count());
    if na * nb > total.vertex_count() {
        return Err(Error::GraphMismatch(format!(
            "product has {} vertices but the total graph only {}",
            na * nb,
            total.vertex_count()
        )));
    }

    // Label-respecting injection of the product vertex set.
    let mut mapping = Vec::with_capacity(na * nb);
    for la in &a.labels {
        for lb in &b.labels {
            let label = format!("{la}{lb}");
            match lookup.get(label.as_str()) {
                Some(&ix) => mapping.push(ix),
                None => {
                    return Err(Error::GraphMismatch(format!(
                        "product vertex {label} is missing from the total graph"
                    )))
                }
            }
        }
    }
    let sector: BTreeSet<usize> = mapping.iter().copied().collect();
    let position: HashMap<usize, usize> = mapping
        .iter()
        .enumerate()
        .map(|(pos, &ix)| (ix, pos))
        .collect();

    // The sector must not couple to the rest of the total graph.
    for &(x, y, _) in &total.edges {
        if sector.contains(&x) != sector.contains(&y) {
            let fail = ProductCheck {
                matches: false,
                witness: format!(
                    "edge {} -- {} leaves the product sector",
                    total.labels[x], total.labels[y]
                ),
                mapping: None,
            };
            return Ok(fail);
        }
    }

    // Expected product edges: factor edge x identity.
    let mut expected: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(x, y, w) in &a.edges {
        for vb in 0..nb {
            let (p, q) = (x * nb + vb, y * nb + vb);
            let key = (p.min(q), p.max(q));
            expected.insert(key, w);
        }
    }
    for &(x, y, w) in &b.edges {
        for va in 0..na {
            let (p, q) = (va * nb + x, va * nb + y);
            let key = (p.min(q), p.max(q));
            expected.insert(key, w);
        }
    }

    let mut actual: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(x, y, w) in &total.edges {
        if let (Some(&p), Some(&q)) = (position.get(&x), position.get(&y)) {
            actual.insert((p.min(q), p.max(q)), w);
        }
    }

    if expected != actual {
        let diff = expected
            .iter()
            .find(|(k, v)| actual.get(k) != Some(v))
            .map(|((p, q), w)| format!("expected edge {p} -- {q} weight {w}"))
            .or_else(|| {
                actual
                    .iter()
                    .find(|(k, v)| expected.get(k) != Some(v))
                    .map(|((p, q), w)| format!("unexpected edge {p} -- {q} weight {w}"))
            })
            .unwrap_or_else(|| "edge sets differ".into());
        return Ok(ProductCheck {
            matches: false,
            witness: diff,
            mapping: None,
        });
    }

    // Self-loop weights add across factors.
    let loops_a: HashMap<usize, f64> = a.self_loops.iter().copied().collect();
    let loops_b: HashMap<usize, f64> = b.self_loops.iter().copied().collect();
    let loops_total: HashMap<usize, f64> = total.self_loops.iter().copied().collect();
    for va in 0..na {
        for vb in 0..nb {
            let want =
                loops_a.get(&va).copied().unwrap_or(0.0) + loops_b.get(&vb).copied().unwrap_or(0.0);
            let got = loops_total
                .get(&mapping[va * nb + vb])
                .copied()
                .unwrap_or(0.0);
            if want != got {
                return Ok(ProductCheck {
                    matches: false,
                    witness: format!(
                        "self-loop on {}{} is {got}, expected {want}",
                        a.labels[va], b.labels[vb]
                    ),
                    mapping: None,
                });
            }
        }
    }

    Ok(ProductCheck {
        matches: true,
        witness: format!("product of {na} x {nb} vertices embeds exactly"),
        mapping: Some(mapping),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncodingMap;
    use crate::gates;
    use crate::graph::default_config;

    fn encoding(n: usize) -> EncodingMap {
        EncodingMap::new(FockBasis::enumerate(n, 2 * n).unwrap()).unwrap()
    }

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cphase_graph_reproduces_the_known_partition() {
        let u = 20.0_f64.sqrt();
        let enc = encoding(2);
        let config = gates::cphase_gate(1, 6, 2, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edges.len(), 4);

        let expected: BTreeSet<BTreeSet<String>> = [
            set(&["1010"]),
            set(&["1001", "1100"]),
            set(&["0110", "0011"]),
            set(&["0101", "0200", "0002"]),
            set(&["2000"]),
            set(&["0020"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.component_labels(), expected);

        // Self-loops exactly on the four doublon states, each at U.
        let loops: BTreeSet<String> = g
            .self_loops
            .iter()
            .map(|&(v, _)| g.labels[v].clone())
            .collect();
        assert_eq!(loops, set(&["2000", "0200", "0020", "0002"]));
        assert!(g.self_loops.iter().all(|&(_, w)| (w - u).abs() < 1e-15));
    }

    #[test]
    fn idle_lattice_gives_edgeless_graph_with_doublon_loops() {
        let enc = encoding(2);
        let g = build_secondary(enc.basis(), &default_config(2, 1.5), &enc).unwrap();
        assert!(g.edges.is_empty());
        for &(v, w) in &g.self_loops {
            let occ = enc.basis().state(v).occupations();
            assert!(occ.iter().any(|&n| n >= 2));
            assert!((w - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn three_qubit_graph_has_fifty_six_vertices() {
        let enc = encoding(3);
        let u = 2.0;
        let mut config = default_config(3, u);
        let rx = gates::rx_gate(1, 1.0, 1.0).unwrap();
        for (a, b, j) in rx.edges() {
            config.add_edge(a, b, j).unwrap();
        }
        let swap = gates::swap_gate(2, 1, 5, u).unwrap();
        for (a, b, j) in swap.edges() {
            config.add_edge(a, b, j).unwrap();
        }
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        assert_eq!(g.vertex_count(), 56);
        assert_eq!(g.computational.len(), 8);
    }

    #[test]
    fn secondary_walker_generator_is_the_primary_hamiltonian() {
        let u = 20.0_f64.sqrt();
        let enc = encoding(2);
        let config = gates::cphase_gate(1, 6, 2, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let h = build_hamiltonian(enc.basis(), &config).unwrap();
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        assert_eq!(g.to_hamiltonian(), h);
    }

    #[test]
    fn edge_count_matches_upper_triangle() {
        let u = 3.0;
        let enc = encoding(2);
        let config = gates::swap_gate(1, 1, 5, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let h = build_hamiltonian(enc.basis(), &config).unwrap();
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        let upper = h.triplets().iter().filter(|&&(r, c, _)| r < c).count();
        assert_eq!(g.edges.len(), upper);
    }

    #[test]
    fn rx_times_swap_factorizes_as_cartesian_product() {
        let u = 2.0;
        // Total: RX on qubit 1, SWAP on (2, 3).
        let enc3 = encoding(3);
        let mut config = default_config(3, u);
        let rx = gates::rx_gate(1, 1.0, 0.7).unwrap();
        for (a, b, j) in rx.edges() {
            config.add_edge(a, b, j).unwrap();
        }
        let swap = gates::swap_gate(2, 1, 5, u).unwrap();
        for (a, b, j) in swap.edges() {
            config.add_edge(a, b, j).unwrap();
        }
        let total = build_secondary(enc3.basis(), &config, &enc3).unwrap();

        // Factors on their own lattices with the same couplings.
        let enc1 = encoding(1);
        let ga =
            build_secondary(enc1.basis(), &rx.minimal().to_config(1, u).unwrap(), &enc1).unwrap();
        let enc2 = encoding(2);
        let gb = build_secondary(
            enc2.basis(),
            &swap.minimal().to_config(2, u).unwrap(),
            &enc2,
        )
        .unwrap();

        let check = cartesian_product_check(&total, &ga, &gb).unwrap();
        assert!(check.matches, "{}", check.witness);
        assert_eq!(check.mapping.unwrap().len(), 20);

        // The pruned total is exactly the product sector.
        let pruned = total.pruned_to_computational();
        assert_eq!(pruned.vertex_count(), 20);
    }

    #[test]
    fn edgeless_product_is_trivially_true() {
        let enc1 = encoding(1);
        let ga = build_secondary(enc1.basis(), &default_config(1, 0.5), &enc1).unwrap();
        let enc2 = encoding(2);
        let gb = build_secondary(enc2.basis(), &default_config(2, 0.5), &enc2).unwrap();
        let enc3 = encoding(3);
        let total = build_secondary(enc3.basis(), &default_config(3, 0.5), &enc3).unwrap();
        let check = cartesian_product_check(&total, &ga, &gb).unwrap();
        assert!(check.matches, "{}", check.witness);
    }

    #[test]
    fn cphase_is_not_a_product_of_single_qubit_graphs() {
        let u = 20.0_f64.sqrt();
        let enc2 = encoding(2);
        let config = gates::cphase_gate(1, 6, 2, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let total = build_secondary(enc2.basis(), &config, &enc2).unwrap();

        let enc1 = encoding(1);
        let rx = gates::rx_gate(1, 1.0, 1.0).unwrap();
        let g1 = build_secondary(enc1.basis(), &rx.to_config(1, u).unwrap(), &enc1).unwrap();
        let check = cartesian_product_check(&total, &g1, &g1).unwrap();
        assert!(!check.matches, "{}", check.witness);
    }

    #[test]
    fn dot_export_is_deterministic_and_well_formed() {
        let u = 20.0_f64.sqrt();
        let enc = encoding(2);
        let config = gates::cphase_gate(1, 6, 2, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        let dot1 = g.to_dot();
        let dot2 = build_secondary(enc.basis(), &config, &enc)
            .unwrap()
            .to_dot();
        assert_eq!(dot1, dot2);
        assert!(dot1.starts_with("graph secondary {"));
        assert_eq!(dot1.matches("doublecircle").count(), 4);
        assert_eq!(dot1.matches(" -- ").count(), 8); // 4 edges + 4 loops
    }

    #[test]
    fn single_vertex_dot_is_minimal() {
        // The vacuum basis on one site yields a one-vertex graph.
        let vacuum = FockBasis::enumerate(0, 1).unwrap();
        let g = SecondaryGraph {
            labels: vec![vacuum.state(0).label()],
            edges: vec![],
            self_loops: vec![],
            computational: vec![],
        };
        let dot = g.to_dot();
        assert_eq!(
            dot,
            "graph secondary {\n  node [shape=circle];\n  \"0\";\n}\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let u = 1.0;
        let enc = encoding(2);
        let config = gates::cphase_gate(1, 6, 2, u)
            .unwrap()
            .to_config(2, u)
            .unwrap();
        let g = build_secondary(enc.basis(), &config, &enc).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: SecondaryGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
