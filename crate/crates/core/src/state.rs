//! Complex state vectors over a shared Fock basis.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState};

/// A normalized amplitude vector tied to its basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amps: DVector<Complex64>,
}

impl StateVector {
    pub fn new(basis: Arc<FockBasis>, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amps.len(),
            });
        }
        Ok(StateVector { basis, amps })
    }

    /// Unit vector on a single basis state.
    pub fn basis_state(basis: Arc<FockBasis>, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: index,
            });
        }
        let mut amps = DVector::zeros(basis.dim());
        amps[index] = Complex64::ONE;
        Ok(StateVector { basis, amps })
    }

    /// Unit vector on a Fock state belonging to the basis.
    pub fn from_fock(basis: Arc<FockBasis>, state: &FockState) -> Result<Self> {
        let index = basis
            .index_of(state)
            .ok_or_else(|| Error::InvalidGraph(format!("state {state} not in basis")))?;
        Self::basis_state(basis, index)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// Probability mass on a set of basis indices.
    pub fn mass_on(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.amps[i].norm_sqr()).sum()
    }

    /// Replace the amplitudes, keeping the basis.
    pub(crate) fn with_amplitudes(&self, amps: DVector<Complex64>) -> StateVector {
        debug_assert_eq!(amps.len(), self.basis.dim());
        StateVector {
            basis: Arc::clone(&self.basis),
            amps,
        }
    }
}
