//! Pulse recipes for the gate set: each constructor resolves the lattice
//! parameters and duration realizing a logic gate, together with the
//! closed-form matrix the pulse enacts on the encoded subspace.
//!
//! The entangling gates are parameterized by the global interaction U and
//! solve for the tunneling J, matching a fixed physical lattice.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::VertexId;
use crate::graph::GraphConfig;
use crate::unitary;

/// Gate kinds with their defining parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GateKind {
    RotX {
        theta: f64,
    },
    RotZ {
        theta: f64,
    },
    Hadamard,
    #[serde(rename = "cphase")]
    CPhase {
        m: u32,
        k: u32,
    },
    Swap {
        k: u32,
        l: u32,
    },
    Identity,
}

/// What a SWAP-family pulse realizes, by the parity of alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapClass {
    MinusSwap,
    ZzSwap,
    Entangling,
}

impl SwapClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SwapClass::MinusSwap => "-SWAP",
            SwapClass::ZzSwap => "ZZ-SWAP",
            SwapClass::Entangling => "entangling",
        }
    }
}

/// A resolved pulse: lattice parameters, duration, and the exact matrix it
/// enacts on the computational subspace at that duration.
///
/// `predicted` is computed from closed forms, never from simulation;
/// simulating the pulse is the independent check. `global_phase` relates
/// `predicted` to the textbook gate (R_X, R_Z, Hadamard, CPHASE, SWAP).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    /// 1-based target qubits; two-qubit gates list the pair (i, i+1).
    pub qubits: Vec<usize>,
    /// Tunneling amplitude J on the pulse's edges, if any.
    pub tunneling: Option<f64>,
    /// Site potential V applied by the pulse, if any.
    pub potential: Option<f64>,
    /// Interaction U the entangling constraints were solved against.
    pub interaction: Option<f64>,
    pub duration: f64,
    pub global_phase: f64,
    #[serde(with = "mat_json")]
    pub predicted: DMatrix<Complex64>,
    /// Set when the realized entangling phase is a multiple of 2 pi.
    pub trivial_phase: bool,
}

/// The entangling phase -pi (m + sqrt(m^2 - 16)) available at ratio
/// U/J = sqrt(m^2 - 16).
pub fn cphase_phase(m: u32) -> f64 {
    let m = m as f64;
    -PI * (m + (m * m - 16.0).sqrt())
}

/// SWAP corner exponent alpha = l + sqrt(l^2 - 4k(k+1) - 1).
pub fn swap_alpha(k: u32, l: u32) -> f64 {
    let (k, l) = (k as f64, l as f64);
    l + (l * l - 4.0 * k * (k + 1.0) - 1.0).sqrt()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_angle(theta: f64) -> Result<f64> {
    if !(0.0..2.0 * PI).contains(&theta) {
        return Err(Error::AngleOutOfRange { theta });
    }
    Ok(theta)
}

fn check_positive(value: f64, what: &str) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what: what.into() });
    }
    if value <= 0.0 {
        return Err(Error::GateConstraint(format!(
            "{what} must be positive, got {value}"
        )));
    }
    Ok(value)
}

/// R_X(theta) = exp(-i theta X / 2).
pub fn rx_matrix(theta: f64) -> DMatrix<Complex64> {
    let (s, co) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(
        2,
        2,
        &[
            c(co),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            c(co),
        ],
    )
}

/// The realized Z pulse diag(1, e^{i theta}) = e^{i theta/2} R_Z(theta).
pub fn rz_matrix(theta: f64) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::ONE,
        Complex64::from_polar(1.0, theta),
    ]))
}

/// The Hadamard matrix.
pub fn hadamard_matrix() -> DMatrix<Complex64> {
    let h = c(0.5_f64.sqrt());
    DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// X rotation on one qubit: lower the barrier inside column `qubit` to J and
/// hold for t = (4 pi - theta) / (2 J). The realized operator is exactly
/// R_X(theta) with no residual phase.
pub fn rx_gate(qubit: usize, theta: f64, tunneling: f64) -> Result<GateSpec> {
    let theta = check_angle(theta)?;
    let j = check_positive(tunneling, "tunneling")?;
    Ok(GateSpec {
        kind: GateKind::RotX { theta },
        qubits: vec![qubit],
        tunneling: Some(j),
        potential: None,
        interaction: None,
        duration: (4.0 * PI - theta) / (2.0 * j),
        global_phase: 0.0,
        predicted: rx_matrix(theta),
        trivial_phase: theta == 0.0,
    })
}

/// Z rotation on one qubit: apply potential V to the |1> site for
/// t = theta / V, realizing diag(1, e^{i theta}) = e^{i theta/2} R_Z(theta).
pub fn rz_gate(qubit: usize, theta: f64, potential: f64) -> Result<GateSpec> {
    let theta = check_angle(theta)?;
    let v = check_positive(potential, "potential")?;
    Ok(GateSpec {
        kind: GateKind::RotZ { theta },
        qubits: vec![qubit],
        tunneling: None,
        potential: Some(v),
        interaction: None,
        duration: theta / v,
        global_phase: theta / 2.0,
        predicted: rz_matrix(theta),
        trivial_phase: theta == 0.0,
    })
}

/// One-step Hadamard: edge J inside the column plus potential 2J on the |0>
/// site, held for t = pi / (2 sqrt(2) J). Realizes e^{i gamma} H with
/// gamma = pi / (2 sqrt(2)) + pi / 2.
pub fn hadamard_gate(qubit: usize, tunneling: f64) -> Result<GateSpec> {
    let j = check_positive(tunneling, "tunneling")?;
    let gamma = PI / (2.0 * 2.0_f64.sqrt()) + PI / 2.0;
    let phase = Complex64::from_polar(1.0, gamma);
    Ok(GateSpec {
        kind: GateKind::Hadamard,
        qubits: vec![qubit],
        tunneling: Some(j),
        potential: Some(2.0 * j),
        interaction: None,
        duration: PI / (2.0 * 2.0_f64.sqrt() * j),
        global_phase: gamma,
        predicted: hadamard_matrix().map(|x| x * phase),
        trivial_phase: false,
    })
}

/// Entangling phase gate on the adjacent pair (qubit, qubit + 1): a single
/// edge between the two |1> sites with U/J = sqrt(m^2 - 16), held for
/// t = k pi / J.
///
/// The doublon sector's eigenphases give the |11> entry
/// exp(-i k pi (m + sqrt(m^2 - 16)) / 2) while |01> and |10> acquire
/// (-1)^k, so even k realizes CPHASE(phi_m) and odd k realizes
/// (Z (x) Z) CPHASE(k phi_m / 2). Odd k requires even m so that the
/// doublon sector closes.
pub fn cphase_gate(qubit: usize, m: u32, k: u32, interaction: f64) -> Result<GateSpec> {
    let u = check_positive(interaction, "interaction")?;
    if m < 4 {
        return Err(Error::GateConstraint(format!("m must be >= 4, got {m}")));
    }
    if m == 4 {
        return Err(Error::GateConstraint(
            "m = 4 needs U = 0 (no interaction) and its phase is trivial".into(),
        ));
    }
    if k == 0 {
        return Err(Error::GateConstraint("k must be >= 1".into()));
    }
    if k % 2 == 1 && m % 2 == 1 {
        return Err(Error::GateConstraint(format!(
            "odd k = {k} requires even m (mk must be even), got m = {m}"
        )));
    }
    let ratio = ((m as f64) * (m as f64) - 16.0).sqrt();
    let j = u / ratio;
    let duration = k as f64 * PI / j;

    let pair_sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let corner = Complex64::from_polar(1.0, k as f64 * cphase_phase(m) / 2.0);
    let predicted = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::ONE,
        c(pair_sign),
        c(pair_sign),
        corner,
    ]));

    Ok(GateSpec {
        kind: GateKind::CPhase { m, k },
        qubits: vec![qubit, qubit + 1],
        tunneling: Some(j),
        potential: None,
        interaction: Some(u),
        duration,
        global_phase: 0.0,
        // m = 5 is the one Pythagorean case left: phi_5 = -8 pi.
        predicted,
        trivial_phase: m == 5,
    })
}

/// SWAP-family gate on the adjacent pair (qubit, qubit + 1): edges between
/// like rows of the two columns with U/J = 4 sqrt(l^2/(2k+1)^2 - 1), held
/// for t = (2k+1) pi / (2J).
///
/// The realized block is antidiag(-1) on {|01>, |10>} and e^{-i alpha pi}
/// on |00> and |11>, with alpha = l + sqrt(l^2 - 4k(k+1) - 1): odd integer
/// alpha gives -SWAP, even gives (Z (x) Z) SWAP, non-integer is a second
/// entangling gate.
pub fn swap_gate(qubit: usize, k: u32, l: u32, interaction: f64) -> Result<GateSpec> {
    let u = check_positive(interaction, "interaction")?;
    if l <= 2 * k + 1 {
        return Err(Error::GateConstraint(format!(
            "need l > 2k + 1, got k = {k}, l = {l}"
        )));
    }
    let odd = (2 * k + 1) as f64;
    let lf = l as f64;
    let ratio = 4.0 * (lf * lf / (odd * odd) - 1.0).sqrt();
    let j = u / ratio;
    let duration = odd * PI / (2.0 * j);

    let alpha = swap_alpha(k, l);
    let corner = Complex64::from_polar(1.0, -alpha * PI);
    let mut predicted = DMatrix::zeros(4, 4);
    predicted[(0, 0)] = corner;
    predicted[(1, 2)] = c(-1.0);
    predicted[(2, 1)] = c(-1.0);
    predicted[(3, 3)] = corner;

    Ok(GateSpec {
        kind: GateKind::Swap { k, l },
        qubits: vec![qubit, qubit + 1],
        tunneling: Some(j),
        potential: None,
        interaction: Some(u),
        duration,
        global_phase: 0.0,
        predicted,
        trivial_phase: false,
    })
}

/// Decompose a single-qubit unitary into an X-Z-X Euler triple, returned in
/// application order (first pulse first). The composed predicted matrices
/// equal the target up to an overall phase.
pub fn euler_single_qubit(
    qubit: usize,
    target: &DMatrix<Complex64>,
    tunneling: f64,
    potential: f64,
) -> Result<Vec<GateSpec>> {
    if target.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: target.nrows(),
        });
    }
    let defect = unitary::unitarity_defect(target);
    if defect > 1e-12 {
        return Err(Error::NonUnitary { deviation: defect });
    }

    let (a, b, d) = euler_xzx_angles(target);
    Ok(vec![
        rx_gate(qubit, d, tunneling)?,
        rz_gate(qubit, b, potential)?,
        rx_gate(qubit, a, tunneling)?,
    ])
}

/// X-Z-X angles (a, b, c) with target = e^{i gamma} R_X(a) R_Z(b) R_X(c),
/// each wrapped into [0, 2 pi).
pub fn euler_xzx_angles(target: &DMatrix<Complex64>) -> (f64, f64, f64) {
    // Normalize to SU(2), then conjugate by Hadamard: H R_X H = R_Z turns
    // the problem into a Z-Y-Z decomposition read off the matrix entries.
    let det = target[(0, 0)] * target[(1, 1)] - target[(0, 1)] * target[(1, 0)];
    let su = target.map(|x| x / det.sqrt());
    let had = hadamard_matrix();
    let v = &had * &su * &had;

    let (v00, v10, v11) = (v[(0, 0)], v[(1, 0)], v[(1, 1)]);
    let beta = 2.0 * v10.norm().atan2(v00.norm());
    let eps = 1e-9;
    let (alpha, delta) = if v10.norm() < eps {
        (0.0, v11.arg() - v00.arg())
    } else if v00.norm() < eps {
        (v10.arg() - (-v[(0, 1)]).arg(), 0.0)
    } else {
        (v10.arg() - v00.arg(), v11.arg() - v10.arg())
    };

    let wrap = |x: f64| x.rem_euclid(2.0 * PI);
    if beta < eps {
        // Pure Z in the conjugated frame is a pure X rotation here.
        (wrap(alpha + delta), 0.0, 0.0)
    } else {
        (wrap(alpha + PI / 2.0), wrap(beta), wrap(delta - PI / 2.0))
    }
}

impl GateSpec {
    /// Number of qubits in the smallest lattice hosting this gate.
    pub fn minimal_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// The gate's edges in lattice coordinates.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, f64)> {
        let q = self.qubits[0];
        match (&self.kind, self.tunneling) {
            (GateKind::RotX { .. }, Some(j)) | (GateKind::Hadamard, Some(j)) => {
                vec![(VertexId::new(q, 0), VertexId::new(q, 1), j)]
            }
            (GateKind::CPhase { .. }, Some(j)) => {
                vec![(VertexId::new(q, 1), VertexId::new(q + 1, 1), j)]
            }
            (GateKind::Swap { .. }, Some(j)) => vec![
                (VertexId::new(q, 0), VertexId::new(q + 1, 0), j),
                (VertexId::new(q, 1), VertexId::new(q + 1, 1), j),
            ],
            _ => Vec::new(),
        }
    }

    /// The gate's applied site potentials in lattice coordinates.
    pub fn potentials(&self) -> Vec<(VertexId, f64)> {
        let q = self.qubits[0];
        match (&self.kind, self.potential) {
            (GateKind::RotZ { .. }, Some(v)) => vec![(VertexId::new(q, 1), v)],
            (GateKind::Hadamard, Some(v)) => vec![(VertexId::new(q, 0), v)],
            _ => Vec::new(),
        }
    }

    /// Flat site indices the pulse touches.
    pub fn support_sites(&self) -> Vec<usize> {
        self.qubits
            .iter()
            .flat_map(|&q| [VertexId::new(q, 0).index(), VertexId::new(q, 1).index()])
            .collect()
    }

    /// True when the duration is pinned by the interaction constraints and
    /// cannot be rescaled.
    pub fn is_interaction_constrained(&self) -> bool {
        matches!(self.kind, GateKind::CPhase { .. } | GateKind::Swap { .. })
    }

    /// Rescale the couplings of a single-qubit pulse so it completes in
    /// `duration` (the Hadamard keeps V/J = 2).
    pub fn with_duration(&self, duration: f64) -> Result<GateSpec> {
        check_positive(duration, "duration")?;
        let q = self.qubits[0];
        match self.kind {
            GateKind::RotX { theta } => rx_gate(q, theta, (4.0 * PI - theta) / (2.0 * duration)),
            GateKind::RotZ { theta } => {
                if theta == 0.0 {
                    return Err(Error::GateConstraint(
                        "a zero-angle Z pulse has no duration to stretch".into(),
                    ));
                }
                rz_gate(q, theta, theta / duration)
            }
            GateKind::Hadamard => hadamard_gate(q, PI / (2.0 * 2.0_f64.sqrt() * duration)),
            _ => Err(Error::GateConstraint(
                "interaction-constrained pulses have a fixed duration".into(),
            )),
        }
    }

    /// Materialize this gate alone on an `n`-qubit lattice.
    pub fn to_config(&self, qubit_count: usize, interaction: f64) -> Result<GraphConfig> {
        for &q in &self.qubits {
            if q == 0 || q > qubit_count {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    count: qubit_count,
                });
            }
        }
        let mut config = GraphConfig::disconnected(2 * qubit_count, interaction);
        for (a, b, j) in self.edges() {
            config.add_edge(a, b, j)?;
        }
        for (v, amount) in self.potentials() {
            config.add_potential(v, amount)?;
        }
        Ok(config)
    }

    /// The same pulse renumbered onto the smallest lattice (qubit 1, or the
    /// pair (1, 2)).
    pub fn minimal(&self) -> GateSpec {
        let mut spec = self.clone();
        spec.qubits = (1..=self.qubits.len()).collect();
        spec
    }

    /// Classification of a SWAP-family pulse by its alpha exponent.
    pub fn swap_class(&self) -> Option<SwapClass> {
        match self.kind {
            GateKind::Swap { k, l } => {
                let alpha = swap_alpha(k, l);
                let rounded = alpha.round();
                if (alpha - rounded).abs() < 1e-9 {
                    if (rounded as i64) % 2 == 0 {
                        Some(SwapClass::ZzSwap)
                    } else {
                        Some(SwapClass::MinusSwap)
                    }
                } else {
                    Some(SwapClass::Entangling)
                }
            }
            _ => None,
        }
    }
}

/// Serialize complex matrices as row-major `[[re, im], ...]` rows.
pub mod mat_json {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .map(|c| [m[(r, c)].re, m[(r, c)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> DMatrix<Complex64> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        DMatrix::from_fn(nrows, ncols, |r, c| {
            Complex64::new(rows[r][c][0], rows[r][c][1])
        })
    }

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(from_rows(&rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncodingMap;
    use crate::evolve::restrict;
    use crate::fock::FockBasis;
    use crate::hamiltonian::build_hamiltonian;
    use crate::unitary::phase_aligned_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// Simulate a gate on its minimal lattice and return the restricted
    /// operator over the computational subspace.
    fn simulate(spec: &GateSpec, interaction: f64) -> crate::evolve::RestrictedOperator {
        simulate_at(spec, interaction, spec.duration)
    }

    fn simulate_at(
        spec: &GateSpec,
        interaction: f64,
        duration: f64,
    ) -> crate::evolve::RestrictedOperator {
        let spec = spec.minimal();
        let n = spec.minimal_qubits();
        let basis = FockBasis::enumerate(n, 2 * n).unwrap();
        let enc = EncodingMap::new(std::sync::Arc::clone(&basis)).unwrap();
        let config = spec.to_config(n, interaction).unwrap();
        let h = build_hamiltonian(&basis, &config).unwrap();
        restrict(&h, duration, enc.support()).unwrap()
    }

    #[test]
    fn rx_zero_angle_is_a_full_rabi_cycle() {
        let g = rx_gate(1, 0.0, 1.0).unwrap();
        assert!((g.duration - 2.0 * PI).abs() < 1e-15);
        let op = simulate(&g, 1.0);
        assert_eq!(op.leakage, 0.0);
        assert!(phase_aligned_distance(&op.matrix, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn rx_pi_realizes_minus_i_x() {
        let g = rx_gate(1, PI, 1.0).unwrap();
        assert!((g.duration - 3.0 * PI / 2.0).abs() < 1e-15);
        let op = simulate(&g, 1.0);
        let minus_ix = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::ZERO,
                -Complex64::i(),
                -Complex64::i(),
                Complex64::ZERO,
            ],
        );
        assert!(crate::unitary::max_abs_diff(&op.matrix, &minus_ix) < 1e-12);
        assert!(crate::unitary::max_abs_diff(&g.predicted, &minus_ix) < 1e-15);
    }

    #[test]
    fn rx_quarter_turn_matches_prediction_exactly() {
        let g = rx_gate(2, PI / 2.0, 1.0).unwrap();
        let op = simulate(&g, 1.0);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &g.predicted) < 1e-10);
        assert_eq!(op.leakage, 0.0);
    }

    #[test]
    fn rz_durations_and_matrices() {
        let zero = rz_gate(1, 0.0, 1.0).unwrap();
        assert_eq!(zero.duration, 0.0);
        let z = rz_gate(1, PI, 1.0).unwrap();
        assert!((z.duration - PI).abs() < 1e-15);
        assert!((z.predicted[(1, 1)] - c(-1.0)).norm() < 1e-12);

        let s = rz_gate(1, PI / 2.0, 0.7).unwrap();
        let op = simulate(&s, 1.0);
        let expect = rz_matrix(PI / 2.0);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &expect) < 1e-10);
        assert!((op.matrix[(1, 1)] - Complex64::i()).norm() < 1e-10);
    }

    #[test]
    fn one_step_hadamard_matches_up_to_phase() {
        let g = hadamard_gate(1, 1.0).unwrap();
        assert!((g.duration - 1.110720734539592).abs() < 1e-12);
        let op = simulate(&g, 1.0);
        assert!(phase_aligned_distance(&op.matrix, &hadamard_matrix()) < 1e-10);
        // The predicted matrix carries the exact realized phase.
        assert!(crate::unitary::max_abs_diff(&op.matrix, &g.predicted) < 1e-10);
    }

    #[test]
    fn hadamard_squares_to_identity_up_to_phase() {
        let g = hadamard_gate(1, 1.3).unwrap();
        let op = simulate(&g, 1.0);
        let squared = &op.matrix * &op.matrix;
        assert!(phase_aligned_distance(&squared, &DMatrix::identity(2, 2)) < 1e-10);
    }

    #[test]
    fn euler_hadamard_gives_three_quarter_turns() {
        let (a, b, c_angle) = euler_xzx_angles(&hadamard_matrix());
        assert!((a - PI / 2.0).abs() < 1e-12);
        assert!((b - PI / 2.0).abs() < 1e-12);
        assert!((c_angle - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn euler_identity_gives_zero_angles() {
        let (a, b, c_angle) = euler_xzx_angles(&DMatrix::identity(2, 2));
        assert_eq!((a, b, c_angle), (0.0, 0.0, 0.0));
        let gates = euler_single_qubit(1, &DMatrix::identity(2, 2), 1.0, 1.0).unwrap();
        assert!((gates[0].duration - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn euler_decomposition_reproduces_random_unitaries() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..20 {
            // Random SU(2) via Euler sampling.
            let (u1, u2, u3) = (
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..PI),
                rng.gen_range(0.0..2.0 * PI),
            );
            let target = rx_matrix(u1) * rz_matrix(u2) * rx_matrix(u3);
            let gates = euler_single_qubit(1, &target, 1.0, 1.0).unwrap();
            // Compose simulated pulses in application order.
            let mut total = DMatrix::identity(2, 2);
            for g in &gates {
                let op = simulate(g, 1.0);
                total = op.matrix * total;
            }
            let dist = phase_aligned_distance(&total, &target);
            assert!(dist < 1e-9, "euler composition off by {dist}");
        }
    }

    #[test]
    fn euler_rejects_non_unitary_input() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 0)] = c(1.5);
        assert!(matches!(
            euler_single_qubit(1, &m, 1.0, 1.0),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn cphase_m6_parameters() {
        let u = 20.0_f64.sqrt();
        let g = cphase_gate(1, 6, 2, u).unwrap();
        assert!((g.tunneling.unwrap() - 1.0).abs() < 1e-12);
        assert!((g.duration - 2.0 * PI).abs() < 1e-12);
        let expected_phase = -PI * (6.0 + 20.0_f64.sqrt());
        assert!((cphase_phase(6) - expected_phase).abs() < 1e-12);
        assert!(!g.trivial_phase);
        let op = simulate(&g, u);
        assert!(op.leakage < 1e-8);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &g.predicted) < 1e-8);
    }

    #[test]
    fn cphase_m5_is_flagged_trivial() {
        let g = cphase_gate(1, 5, 2, 3.0).unwrap();
        assert!(g.trivial_phase);
        // phi_5 = -8 pi: the corner reduces to +1.
        assert!((g.predicted[(3, 3)] - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn cphase_odd_k_realizes_zz_times_half_phase() {
        // k = 1 with even m: |01> and |10> pick up -1 and the corner holds
        // half the even-k phase. Simulation is the oracle for the corner.
        let u = 48.0_f64.sqrt();
        let g = cphase_gate(1, 8, 1, u).unwrap();
        let op = simulate(&g, u);
        assert!(op.leakage < 1e-8);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &g.predicted) < 1e-8);
        assert!((op.matrix[(1, 1)] - c(-1.0)).norm() < 1e-8);
        let corner = Complex64::from_polar(1.0, cphase_phase(8) / 2.0);
        assert!((op.matrix[(3, 3)] - corner).norm() < 1e-8);
        // Two k = 1 pulses compose to the k = 2 gate.
        let twice = &op.matrix * &op.matrix;
        let full = cphase_gate(1, 8, 2, u).unwrap();
        assert!(crate::unitary::max_abs_diff(&twice, &full.predicted) < 1e-8);
    }

    #[test]
    fn cphase_constraint_violations() {
        assert!(matches!(
            cphase_gate(1, 4, 2, 1.0),
            Err(Error::GateConstraint(_))
        ));
        assert!(matches!(
            cphase_gate(1, 7, 1, 1.0),
            Err(Error::GateConstraint(_))
        ));
        assert!(matches!(
            cphase_gate(1, 6, 0, 1.0),
            Err(Error::GateConstraint(_))
        ));
        assert!(matches!(
            cphase_gate(1, 6, 2, 0.0),
            Err(Error::GateConstraint(_))
        ));
    }

    #[test]
    fn cphase_00_input_is_stationary() {
        let u = 20.0_f64.sqrt();
        let g = cphase_gate(1, 6, 2, u).unwrap().minimal();
        let basis = FockBasis::enumerate(2, 4).unwrap();
        let enc = EncodingMap::new(std::sync::Arc::clone(&basis)).unwrap();
        let config = g.to_config(2, u).unwrap();
        let h = build_hamiltonian(&basis, &config).unwrap();
        let psi = enc.encode("00").unwrap();
        // |1010> is annihilated by the pulse Hamiltonian, so it is
        // stationary at every time, not just the gate time.
        assert_eq!(h.matvec(psi.amplitudes()).norm(), 0.0);
    }

    #[test]
    fn cphase_phase_identity_at_sample_points() {
        for m in [6u32, 8, 9, 16, 17] {
            let u = (((m * m) as f64) - 16.0).sqrt();
            let g = cphase_gate(1, m, 2, u).unwrap();
            let op = simulate(&g, u);
            assert!(op.leakage < 1e-8, "m={m}");
            let simulated_arg = op.matrix[(3, 3)].arg();
            let expected = cphase_phase(m).rem_euclid(2.0 * PI);
            let diff = (simulated_arg.rem_euclid(2.0 * PI) - expected).abs();
            let wrapped = diff.min(2.0 * PI - diff);
            assert!(wrapped < 1e-8, "m={m}: phase off by {wrapped}");
        }
    }

    #[test]
    fn cphase_phase_goes_as_eight_pi_over_m() {
        // Wrapped into (-pi, pi], the entangling phase approaches a
        // magnitude of 8 pi / m for large m.
        let m = 200;
        let wrapped = cphase_phase(m).rem_euclid(2.0 * PI);
        let principal = if wrapped > PI {
            wrapped - 2.0 * PI
        } else {
            wrapped
        };
        let asymptote = 8.0 * PI / m as f64;
        assert!((principal.abs() - asymptote).abs() / asymptote < 0.05);
    }

    #[test]
    fn swap_minimal_solution_is_minus_swap() {
        let u = 16.0 / 3.0;
        let g = swap_gate(1, 1, 5, u).unwrap();
        assert!((g.tunneling.unwrap() - 1.0).abs() < 1e-12);
        assert!((g.duration - 3.0 * PI / 2.0).abs() < 1e-12);
        assert!((swap_alpha(1, 5) - 9.0).abs() < 1e-12);
        assert_eq!(g.swap_class(), Some(SwapClass::MinusSwap));

        let op = simulate(&g, u);
        assert!(op.leakage < 1e-8);
        let mut minus_swap = DMatrix::zeros(4, 4);
        minus_swap[(0, 0)] = c(-1.0);
        minus_swap[(1, 2)] = c(-1.0);
        minus_swap[(2, 1)] = c(-1.0);
        minus_swap[(3, 3)] = c(-1.0);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &minus_swap) < 1e-8);
        assert!(phase_aligned_distance(&op.matrix, &minus_swap) < 1e-8);
    }

    #[test]
    fn swap_constraint_violation_is_rejected() {
        assert!(matches!(
            swap_gate(1, 0, 1, 1.0),
            Err(Error::GateConstraint(_))
        ));
    }

    #[test]
    fn swap_non_integer_alpha_is_entangling() {
        let u = 2.0;
        let g = swap_gate(1, 1, 6, u).unwrap();
        assert_eq!(g.swap_class(), Some(SwapClass::Entangling));
        let alpha = swap_alpha(1, 6);
        assert!((alpha - (6.0 + 27.0_f64.sqrt())).abs() < 1e-12);
        let op = simulate(&g, u);
        assert!(op.leakage < 1e-8);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &g.predicted) < 1e-8);
    }

    #[test]
    fn all_library_gates_match_their_predictions() {
        let u = 20.0_f64.sqrt();
        let gates = vec![
            rx_gate(1, 1.234, 0.8).unwrap(),
            rz_gate(1, 2.5, 1.3).unwrap(),
            hadamard_gate(1, 0.9).unwrap(),
            cphase_gate(1, 6, 2, u).unwrap(),
            cphase_gate(1, 9, 2, u).unwrap(),
            swap_gate(1, 1, 5, u).unwrap(),
            swap_gate(1, 2, 7, u).unwrap(),
        ];
        for g in gates {
            let op = simulate(&g, g.interaction.unwrap_or(u));
            assert!(op.leakage < 1e-8, "{:?} leaked {}", g.kind, op.leakage);
            let dist = phase_aligned_distance(&op.matrix, &g.predicted);
            assert!(dist < 1e-8, "{:?} off by {dist}", g.kind);
        }
    }

    #[test]
    fn rescaled_pulses_keep_their_gate() {
        let g = hadamard_gate(1, 1.0).unwrap();
        let stretched = g.with_duration(3.0).unwrap();
        assert!((stretched.duration - 3.0).abs() < 1e-12);
        assert!((stretched.potential.unwrap() - 2.0 * stretched.tunneling.unwrap()).abs() < 1e-12);
        let op = simulate_at(&stretched, 1.0, 3.0);
        assert!(phase_aligned_distance(&op.matrix, &hadamard_matrix()) < 1e-10);

        let rx = rx_gate(1, 1.0, 2.0).unwrap().with_duration(5.0).unwrap();
        assert!((rx.duration - 5.0).abs() < 1e-12);
        let op = simulate_at(&rx, 1.0, 5.0);
        assert!(crate::unitary::max_abs_diff(&op.matrix, &rx_matrix(1.0)) < 1e-10);
    }

    #[test]
    fn angle_range_is_enforced() {
        assert!(matches!(
            rx_gate(1, -0.1, 1.0),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            rx_gate(1, 2.0 * PI, 1.0),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            rz_gate(1, 7.0, 1.0),
            Err(Error::AngleOutOfRange { .. })
        ));
    }

    #[test]
    fn gate_spec_serializes_with_matrix() {
        let g = cphase_gate(1, 6, 2, 1.0).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GateSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.kind, g.kind);
        assert!(crate::unitary::max_abs_diff(&back.predicted, &g.predicted) < 1e-15);
    }
}
