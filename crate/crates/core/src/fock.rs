//! Bosonic Fock states over labeled lattice sites, and the indexed basis
//! of all occupation vectors with fixed particle number.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the Fock-space dimension. Guards against accidental
/// exponential blow-up; override via [`FockBasis::enumerate_capped`].
pub const DEFAULT_DIM_CAP: usize = 200_000;

/// A lattice site, stored as a flat index `0..V-1`.
///
/// For the standard two-row qubit lattice the flat index maps to
/// `(column, row)` coordinates with column-major layout: column `i`
/// (1-based) occupies flat indices `2(i-1)` (row 0) and `2(i-1)+1` (row 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(usize);

impl VertexId {
    /// Site at 1-based `column` and row `0` or `1` of the qubit lattice.
    pub fn new(column: usize, row: u8) -> Self {
        assert!(column >= 1, "columns are 1-based");
        assert!(row < 2, "row must be 0 or 1");
        VertexId(2 * (column - 1) + row as usize)
    }

    /// Wrap an existing flat site index.
    pub fn from_flat(index: usize) -> Self {
        VertexId(index)
    }

    /// The flat site index.
    pub fn index(self) -> usize {
        self.0
    }

    /// 1-based column on the two-row lattice.
    pub fn column(self) -> usize {
        self.0 / 2 + 1
    }

    /// Row (0 or 1) on the two-row lattice.
    pub fn row(self) -> u8 {
        (self.0 % 2) as u8
    }
}

/// Occupation-number vector: one entry per site, summing to the particle
/// number of the enclosing basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState {
    occ: Vec<u8>,
}

impl FockState {
    pub fn new(occupations: Vec<u8>) -> Self {
        FockState { occ: occupations }
    }

    pub fn vacuum(sites: usize) -> Self {
        FockState {
            occ: vec![0; sites],
        }
    }

    pub fn site_count(&self) -> usize {
        self.occ.len()
    }

    pub fn particle_count(&self) -> usize {
        self.occ.iter().map(|&n| n as usize).sum()
    }

    pub fn occupations(&self) -> &[u8] {
        &self.occ
    }

    /// Occupation number on site `v`.
    pub fn number_on(&self, v: VertexId) -> Result<u8> {
        self.occ
            .get(v.index())
            .copied()
            .ok_or(Error::SiteOutOfRange {
                site: v.index(),
                sites: self.occ.len(),
            })
    }

    /// Move one boson from `from` to `to`, returning the new state and the
    /// bosonic matrix element sqrt(n_from * (n_to + 1)).
    ///
    /// Annihilating an empty site yields amplitude 0 and leaves the state
    /// unchanged.
    pub fn apply_hop(&self, from: VertexId, to: VertexId) -> Result<(FockState, f64)> {
        let sites = self.occ.len();
        if from.index() >= sites {
            return Err(Error::SiteOutOfRange {
                site: from.index(),
                sites,
            });
        }
        if to.index() >= sites {
            return Err(Error::SiteOutOfRange {
                site: to.index(),
                sites,
            });
        }
        assert_ne!(from, to, "hop requires two distinct sites");
        let n_from = self.occ[from.index()];
        if n_from == 0 {
            return Ok((self.clone(), 0.0));
        }
        let n_to = self.occ[to.index()];
        let mut occ = self.occ.clone();
        occ[from.index()] = n_from - 1;
        occ[to.index()] = n_to + 1;
        let amp = ((n_from as f64) * (n_to as f64 + 1.0)).sqrt();
        Ok((FockState { occ }, amp))
    }

    /// Compact label, e.g. `"1010"`. Falls back to comma separation when an
    /// occupation needs more than one digit.
    pub fn label(&self) -> String {
        if self.occ.iter().all(|&n| n < 10) {
            self.occ.iter().map(|n| char::from(b'0' + n)).collect()
        } else {
            self.occ
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.label())
    }
}

/// All Fock states of `particle_count` bosons on `site_count` sites, in
/// lexicographically descending occupation order, with O(1) inverse lookup.
///
/// Immutable after construction; share via [`Arc`].
#[derive(Debug)]
pub struct FockBasis {
    particle_count: usize,
    site_count: usize,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    /// Enumerate the basis under the default dimension cap.
    pub fn enumerate(particle_count: usize, site_count: usize) -> Result<Arc<Self>> {
        Self::enumerate_capped(particle_count, site_count, DEFAULT_DIM_CAP)
    }

    /// Enumerate the basis, rejecting dimensions above `cap`.
    pub fn enumerate_capped(
        particle_count: usize,
        site_count: usize,
        cap: usize,
    ) -> Result<Arc<Self>> {
        assert!(site_count >= 1, "need at least one site");
        let dim = multiset_coefficient(site_count, particle_count)
            .filter(|&d| d <= cap)
            .ok_or(Error::DimensionCap {
                required: multiset_coefficient(site_count, particle_count).unwrap_or(usize::MAX),
                cap,
            })?;

        let mut states = Vec::with_capacity(dim);
        let mut occ = vec![0u8; site_count];
        fill_descending(&mut occ, 0, particle_count, &mut states);
        debug_assert_eq!(states.len(), dim);

        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Arc::new(FockBasis {
            particle_count,
            site_count,
            states,
            index,
        }))
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &FockState {
        &self.states[index]
    }

    /// Basis index of a state, if it belongs to this basis.
    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// Number of occupation vectors: C(sites + particles - 1, particles).
/// `None` on overflow.
pub fn multiset_coefficient(sites: usize, particles: usize) -> Option<usize> {
    binomial(sites + particles - 1, particles)
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Recursive lexicographic-descending enumeration: the first site takes the
/// largest occupation first.
fn fill_descending(occ: &mut [u8], site: usize, remaining: usize, out: &mut Vec<FockState>) {
    if site == occ.len() - 1 {
        occ[site] = remaining as u8;
        out.push(FockState::new(occ.to_vec()));
        return;
    }
    for n in (0..=remaining).rev() {
        occ[site] = n as u8;
        fill_descending(occ, site + 1, remaining - n, out);
    }
    occ[site] = 0;
}
