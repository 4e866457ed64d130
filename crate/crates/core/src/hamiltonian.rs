//! Sparse Hermitian Bose-Hubbard matrices assembled over a Fock basis.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, VertexId};
use crate::graph::GraphConfig;

/// Triplet-based Hermitian matrix: deduplicated, sorted by (row, col), both
/// triangles stored explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    /// Build from raw triplets; duplicate coordinates accumulate and exact
    /// zeros are dropped.
    pub fn from_triplets(
        dim: usize,
        raw: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in raw {
            *acc.entry((r, c)).or_insert(Complex64::ZERO) += v;
        }
        let triplets = acc
            .into_iter()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseHermitian { dim, triplets }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn triplets(&self) -> &[(usize, usize, Complex64)] {
        &self.triplets
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.triplets {
            m[(r, c)] = v;
        }
        m
    }

    pub fn matvec(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut y = DVector::zeros(self.dim);
        for &(r, c, v) in &self.triplets {
            y[r] += v * x[c];
        }
        y
    }

    /// Largest deviation `|H[r,c] - conj(H[c,r])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let lookup: BTreeMap<(usize, usize), Complex64> =
            self.triplets.iter().map(|&(r, c, v)| ((r, c), v)).collect();
        let mut worst: f64 = 0.0;
        for (&(r, c), &v) in &lookup {
            let mirror = lookup.get(&(c, r)).copied().unwrap_or(Complex64::ZERO);
            worst = worst.max((v - mirror.conj()).norm());
        }
        worst
    }

    /// Real expectation value <x|H|x>.
    pub fn expectation(&self, x: &DVector<Complex64>) -> f64 {
        x.dotc(&self.matvec(x)).re
    }
}

/// Assemble the Bose-Hubbard matrix of `config` over `basis`:
/// hopping `-J` on each edge, `-V_i n_i` site potentials, and
/// `U_i/2 n_i (n_i - 1)` on-site interaction.
pub fn build_hamiltonian(basis: &FockBasis, config: &GraphConfig) -> Result<SparseHermitian> {
    if config.site_count != basis.site_count() {
        return Err(Error::DimensionMismatch {
            expected: basis.site_count(),
            got: config.site_count,
        });
    }
    config.validate()?;

    let dim = basis.dim();
    let mut triplets: Vec<(usize, usize, Complex64)> = Vec::new();

    for (col, state) in basis.states().iter().enumerate() {
        // Diagonal: potentials and interaction.
        let mut diag = 0.0;
        for (site, &n) in state.occupations().iter().enumerate() {
            let n = n as f64;
            diag -= config.potentials[site] * n;
            diag += config.interaction_at(site) / 2.0 * n * (n - 1.0);
        }
        if diag != 0.0 {
            triplets.push((col, col, Complex64::new(diag, 0.0)));
        }

        // Off-diagonal: both hop directions per edge.
        for edge in &config.edges {
            if edge.tunneling == 0.0 {
                continue;
            }
            let a = VertexId::from_flat(edge.a);
            let b = VertexId::from_flat(edge.b);
            for (from, to) in [(a, b), (b, a)] {
                let (hopped, amp) = state.apply_hop(from, to)?;
                if amp == 0.0 {
                    continue;
                }
                let row = basis
                    .index_of(&hopped)
                    .expect("hopping conserves particle number");
                triplets.push((row, col, Complex64::new(-edge.tunneling * amp, 0.0)));
            }
        }
    }

    Ok(SparseHermitian::from_triplets(dim, triplets))
}
