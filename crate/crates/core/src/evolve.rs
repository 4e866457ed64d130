//! Exact unitary time evolution exp(-iHt) and subspace-restricted operators.
//!
//! Small systems use a dense Hermitian eigendecomposition; above
//! [`DENSE_EVOLUTION_LIMIT`] a Lanczos propagator with adaptive time
//! stepping takes over.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::SparseHermitian;
use crate::state::StateVector;

/// Largest dimension evolved by dense eigendecomposition. Chosen so the
/// full three-qubit (dim 56) and five-qubit (dim 2002) lattices take the
/// exact path.
pub const DENSE_EVOLUTION_LIMIT: usize = 2048;

/// Krylov subspace size for the Lanczos propagator.
pub const KRYLOV_DIM: usize = 30;

/// Local error target per accepted Lanczos step.
pub const KRYLOV_STEP_TOL: f64 = 1e-11;

/// A reusable propagator for one Hamiltonian. Construction factors the
/// matrix once; `apply` then evolves any state for any duration.
pub enum Propagator {
    Dense {
        eigenvalues: DVector<f64>,
        eigenvectors: DMatrix<Complex64>,
    },
    Krylov {
        matrix: SparseHermitian,
    },
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and an
/// orthonormal eigenvector matrix.
pub(crate) fn hermitian_eigen(
    m: &DMatrix<Complex64>,
) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let a =
        faer::Mat::<faer::c64>::from_fn(n, n, |r, c| faer::c64::new(m[(r, c)].re, m[(r, c)].im));
    let eig = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigendecomposition failed: {e:?}")))?;
    let values = DVector::from_iterator(n, (0..n).map(|k| eig.S()[k].re));
    let vectors = DMatrix::from_fn(n, n, |r, c| {
        let z = eig.U()[(r, c)];
        Complex64::new(z.re, z.im)
    });
    Ok((values, vectors))
}

/// Eigendecomposition of a real symmetric tridiagonal matrix.
fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> Result<(Vec<f64>, faer::Mat<f64>)> {
    let m = alphas.len();
    let t = faer::Mat::<f64>::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = t
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numerical(format!("tridiagonal eigendecomposition failed: {e:?}")))?;
    let values = (0..m).map(|k| eig.S()[k]).collect();
    Ok((values, eig.U().to_owned()))
}

impl Propagator {
    /// Pick dense or Krylov by dimension.
    pub fn new(h: &SparseHermitian) -> Result<Self> {
        if h.dim() <= DENSE_EVOLUTION_LIMIT {
            Self::dense(h)
        } else {
            Ok(Self::krylov(h))
        }
    }

    pub fn dense(h: &SparseHermitian) -> Result<Self> {
        let (eigenvalues, eigenvectors) = hermitian_eigen(&h.to_dense())?;
        Ok(Propagator::Dense {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn krylov(h: &SparseHermitian) -> Self {
        Propagator::Krylov { matrix: h.clone() }
    }

    pub fn dim(&self) -> usize {
        match self {
            Propagator::Dense { eigenvectors, .. } => eigenvectors.nrows(),
            Propagator::Krylov { matrix } => matrix.dim(),
        }
    }

    /// Apply exp(-iHt) to raw amplitudes.
    pub fn apply_raw(&self, amps: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
        if amps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: amps.len(),
            });
        }
        if !t.is_finite() {
            return Err(Error::NonFinite {
                what: "duration".into(),
            });
        }
        if t == 0.0 {
            return Ok(amps.clone());
        }
        match self {
            Propagator::Dense {
                eigenvalues,
                eigenvectors,
            } => {
                let mut coeffs = eigenvectors.adjoint() * amps;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c *= Complex64::from_polar(1.0, -eigenvalues[k] * t);
                }
                Ok(eigenvectors * coeffs)
            }
            Propagator::Krylov { matrix } => lanczos_expm(matrix, amps, t),
        }
    }

    /// Apply exp(-iHt) to a state vector.
    pub fn apply(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        Ok(psi.with_amplitudes(self.apply_raw(psi.amplitudes(), t)?))
    }
}

/// One-shot evolution exp(-iHt) |psi>. Negative `t` reverses.
pub fn evolve(h: &SparseHermitian, psi: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.apply(psi, t)
}

/// The action of exp(-iHt) restricted to a list of basis indices, with the
/// worst-case probability mass leaking outside that subspace.
#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    pub indices: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
    pub leakage: f64,
}

impl RestrictedOperator {
    /// Deviation of `matrix * matrix^dagger` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.nrows();
        let prod = &self.matrix * self.matrix.adjoint();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let expect = if r == c {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((prod[(r, c)] - expect).norm());
            }
        }
        worst
    }
}

/// Evolve each subspace basis vector and project back onto the subspace.
/// Column order follows `subspace`. Leakage is the maximum, over input
/// columns, of the squared amplitude ending up outside the subspace;
/// it is exactly 0 when the subspace covers the whole basis.
pub fn restrict(h: &SparseHermitian, t: f64, subspace: &[usize]) -> Result<RestrictedOperator> {
    let dim = h.dim();
    let mut seen = std::collections::HashSet::new();
    for &ix in subspace {
        if ix >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: ix,
            });
        }
        if !seen.insert(ix) {
            return Err(Error::InvalidGraph(format!("repeated subspace index {ix}")));
        }
    }

    let prop = Propagator::new(h)?;
    let inside: std::collections::HashSet<usize> = subspace.iter().copied().collect();
    let k = subspace.len();
    let mut matrix = DMatrix::zeros(k, k);
    let mut leakage: f64 = 0.0;

    for (col, &start) in subspace.iter().enumerate() {
        let mut amps = DVector::zeros(dim);
        amps[start] = Complex64::ONE;
        let evolved = prop.apply_raw(&amps, t)?;
        for (row, &ix) in subspace.iter().enumerate() {
            matrix[(row, col)] = evolved[ix];
        }
        let outside: f64 = (0..dim)
            .filter(|ix| !inside.contains(ix))
            .map(|ix| evolved[ix].norm_sqr())
            .sum();
        leakage = leakage.max(outside);
    }

    Ok(RestrictedOperator {
        indices: subspace.to_vec(),
        matrix,
        leakage,
    })
}

/// Lanczos propagation with adaptive step size: project onto a Krylov
/// subspace, exponentiate the tridiagonal projection, and accept the step
/// when the a-posteriori residual estimate meets [`KRYLOV_STEP_TOL`].
fn lanczos_expm(
    h: &SparseHermitian,
    amps: &DVector<Complex64>,
    t: f64,
) -> Result<DVector<Complex64>> {
    let total_norm = amps.norm();
    if total_norm == 0.0 || t == 0.0 {
        return Ok(amps.clone());
    }

    let mut state = amps.clone();
    let mut remaining = t;
    let mut dt = t;
    let min_step = t.abs() * 1e-12;

    while remaining != 0.0 {
        if dt.abs() > remaining.abs() {
            dt = remaining;
        }
        let norm = state.norm();
        let (basis_vecs, alphas, betas, invariant) = lanczos_basis(h, &state, KRYLOV_DIM);
        let m = alphas.len();

        loop {
            let small = expm_tridiagonal(&alphas, &betas[..m - 1], dt)?;
            // Residual estimate: weight escaping through the last coupling.
            let residual = if invariant {
                0.0
            } else {
                betas[m - 1] * small[m - 1].norm() * dt.abs()
            };
            if residual <= KRYLOV_STEP_TOL || invariant {
                let mut next = DVector::zeros(state.len());
                for (j, v) in basis_vecs.iter().enumerate() {
                    next += v * (small[j] * Complex64::from(norm));
                }
                state = next;
                remaining -= dt;
                if residual < KRYLOV_STEP_TOL / 100.0 {
                    dt *= 2.0;
                }
                break;
            }
            dt /= 2.0;
            if dt.abs() < min_step {
                return Err(Error::KrylovNoConvergence { residual });
            }
        }
    }
    Ok(state)
}

/// Lanczos iteration with full reorthogonalization. Returns the orthonormal
/// basis, the tridiagonal coefficients, and whether the subspace closed
/// (happy breakdown, making the projection exact).
fn lanczos_basis(
    h: &SparseHermitian,
    start: &DVector<Complex64>,
    max_dim: usize,
) -> (Vec<DVector<Complex64>>, Vec<f64>, Vec<f64>, bool) {
    let scale = start.norm();
    let mut vecs = vec![start / Complex64::from(scale)];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();

    for j in 0..max_dim {
        let mut w = h.matvec(&vecs[j]);
        let alpha = vecs[j].dotc(&w).re;
        alphas.push(alpha);
        w -= &vecs[j] * Complex64::from(alpha);
        if j > 0 {
            w -= &vecs[j - 1] * Complex64::from(betas[j - 1]);
        }
        // Full reorthogonalization keeps the basis orthonormal at these
        // subspace sizes.
        for v in &vecs {
            let overlap = v.dotc(&w);
            w -= v * overlap;
        }
        let beta = w.norm();
        betas.push(beta);
        if beta < 1e-13 * scale.max(1.0) {
            return (vecs, alphas, betas, true);
        }
        if j + 1 == max_dim {
            break;
        }
        vecs.push(w / Complex64::from(beta));
    }
    (vecs, alphas, betas, false)
}

/// First column of exp(-i T dt) for a real symmetric tridiagonal T.
fn expm_tridiagonal(alphas: &[f64], betas: &[f64], dt: f64) -> Result<DVector<Complex64>> {
    let m = alphas.len();
    let (values, vectors) = tridiagonal_eigen(alphas, betas)?;
    let mut coeffs = DVector::zeros(m);
    for k in 0..m {
        let phase = Complex64::from_polar(1.0, -values[k] * dt);
        let weight = Complex64::from(vectors[(0, k)]);
        for j in 0..m {
            coeffs[j] += Complex64::from(vectors[(j, k)]) * phase * weight;
        }
    }
    Ok(coeffs)
}
