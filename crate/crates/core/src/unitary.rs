//! Comparison of operators up to an overall phase.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Phase gamma minimizing ||a - e^{i gamma} b|| in the Frobenius sense,
/// i.e. the argument of tr(b^dagger a). Returns 0 when the overlap
/// vanishes.
pub fn aligning_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    if overlap.norm() == 0.0 {
        0.0
    } else {
        overlap.arg()
    }
}

/// Entrywise max-norm distance between `a` and `e^{i gamma} b` at the
/// aligning phase. Operators that agree up to an overall phase score ~0.
pub fn phase_aligned_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "operators must have equal shape");
    let phase = Complex64::from_polar(1.0, aligning_phase(a, b));
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise max-norm distance, no phase freedom.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "operators must have equal shape");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation of `m^dagger m` from the identity.
pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let d = m.ncols();
    let prod = m.adjoint() * m;
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
