//! Piecewise-constant lattice configurations: weighted tunneling edges,
//! site potentials, and the on-site interaction strength.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::VertexId;

/// An undirected tunneling edge with amplitude `tunneling` (the J of the
/// hopping term). Stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub tunneling: f64,
}

/// On-site interaction strength: one global U, or one per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Interaction {
    Uniform(f64),
    PerSite(Vec<f64>),
}

/// One lattice configuration, held fixed for the duration of a pulse.
///
/// The Hamiltonian assembled from a config is
/// `-sum_edges J (hop + h.c.) - sum_sites V_i n_i + sum_sites U_i/2 n_i (n_i - 1)`;
/// note the minus sign on the stored potentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub site_count: usize,
    pub edges: Vec<Edge>,
    pub potentials: Vec<f64>,
    pub interaction: Interaction,
}

impl GraphConfig {
    /// Edgeless lattice with zero potentials.
    pub fn disconnected(site_count: usize, interaction: f64) -> Self {
        GraphConfig {
            site_count,
            edges: Vec::new(),
            potentials: vec![0.0; site_count],
            interaction: Interaction::Uniform(interaction),
        }
    }

    /// Interaction strength at a site.
    pub fn interaction_at(&self, site: usize) -> f64 {
        match &self.interaction {
            Interaction::Uniform(u) => *u,
            Interaction::PerSite(us) => us[site],
        }
    }

    /// Add an undirected edge; the pair is canonicalized to `a < b`.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId, tunneling: f64) -> Result<()> {
        let (a, b) = (a.index(), b.index());
        if a == b {
            return Err(Error::InvalidGraph(format!(
                "self-loop on site {a}; represent it as a potential"
            )));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if self.edges.iter().any(|e| e.a == a && e.b == b) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
        }
        self.edges.push(Edge { a, b, tunneling });
        Ok(())
    }

    /// Add `amount` to the potential on a site.
    pub fn add_potential(&mut self, v: VertexId, amount: f64) -> Result<()> {
        let site = v.index();
        if site >= self.site_count {
            return Err(Error::SiteOutOfRange {
                site,
                sites: self.site_count,
            });
        }
        self.potentials[site] += amount;
        Ok(())
    }

    /// Check structural invariants and parameter finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.potentials.len() != self.site_count {
            return Err(Error::DimensionMismatch {
                expected: self.site_count,
                got: self.potentials.len(),
            });
        }
        if let Interaction::PerSite(us) = &self.interaction {
            if us.len() != self.site_count {
                return Err(Error::DimensionMismatch {
                    expected: self.site_count,
                    got: us.len(),
                });
            }
            if us.iter().any(|u| !u.is_finite()) {
                return Err(Error::NonFinite {
                    what: "per-site interaction".into(),
                });
            }
        }
        if let Interaction::Uniform(u) = self.interaction {
            if !u.is_finite() {
                return Err(Error::NonFinite {
                    what: "interaction".into(),
                });
            }
        }
        if self.potentials.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "potential".into(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-loop on site {}", e.a)));
            }
            if e.a >= self.site_count || e.b >= self.site_count {
                return Err(Error::SiteOutOfRange {
                    site: e.a.max(e.b),
                    sites: self.site_count,
                });
            }
            if !e.tunneling.is_finite() {
                return Err(Error::NonFinite {
                    what: format!("tunneling on ({}, {})", e.a, e.b),
                });
            }
            let key = (e.a.min(e.b), e.a.max(e.b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(())
    }
}

/// Idle lattice for `qubit_count` encoded qubits: `2n` sites, no edges, zero
/// potentials. Every single-occupancy-per-column state is a zero-energy
/// eigenstate.
pub fn default_config(qubit_count: usize, interaction: f64) -> GraphConfig {
    assert!(qubit_count >= 1);
    GraphConfig::disconnected(2 * qubit_count, interaction)
}
