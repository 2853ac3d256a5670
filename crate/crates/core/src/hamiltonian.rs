//! Hamiltonians of one resonant `{|g1,n⟩, |e,n⟩, |g2,n+1⟩}` manifold.
//!
//! Basis order is always `(g1,n), (e,n), (g2,n+1)`. The pump (laser) couples
//! the first two states, the Stokes (cavity) field the last two. ħ = 1, so
//! matrix entries are angular frequencies in rad/s.

use alloc::format;
use alloc::string::String;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::basis::StateVector;
use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A 3×3 Hermitian matrix in the manifold basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianMatrix(Matrix3<C64>);

impl HermitianMatrix {
    pub const DIMENSION: usize = 3;

    pub fn zero() -> Self {
        Self(Matrix3::from_element(ZERO))
    }

    /// Wraps `m` after checking exact Hermiticity.
    pub fn from_matrix(m: Matrix3<C64>) -> Result<Self> {
        let h = Self(m);
        if h.is_hermitian() {
            Ok(h)
        } else {
            Err(Error::InvalidArgument(String::from("matrix is not Hermitian")))
        }
    }

    pub fn dimension(&self) -> usize {
        Self::DIMENSION
    }

    pub fn entries(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    /// `entries[i][j] == conj(entries[j][i])`, bitwise.
    pub fn is_hermitian(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.0[(i, j)] == self.0[(j, i)].conj()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &Vector3<C64>) -> Vector3<C64> {
        self.0 * v
    }

    /// Eigenvalues in ascending order with the matching eigenvectors as
    /// columns.
    pub fn eigen(&self) -> ([f64; 3], Matrix3<C64>) {
        let eig = SymmetricEigen::new(self.0);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = [
            eig.eigenvalues[order[0]],
            eig.eigenvalues[order[1]],
            eig.eigenvalues[order[2]],
        ];
        let vectors = Matrix3::from_columns(&[
            eig.eigenvectors.column(order[0]).into_owned(),
            eig.eigenvectors.column(order[1]).into_owned(),
            eig.eigenvectors.column(order[2]).into_owned(),
        ]);
        (values, vectors)
    }

    /// `exp(-i H dt)` through the eigendecomposition of `H`.
    pub fn evolution_operator(&self, dt: f64) -> Matrix3<C64> {
        let (values, vectors) = self.eigen();
        let mut phases = Matrix3::from_element(ZERO);
        for (k, lambda) in values.iter().enumerate() {
            let arg = -lambda * dt;
            phases[(k, k)] = C64::new(libm::cos(arg), libm::sin(arg));
        }
        vectors * phases * vectors.adjoint()
    }
}

/// Reference frame of a manifold Hamiltonian.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `P H P` in the lab frame, carrying the optical carrier.
    LabProjected,
    /// Rotating frame of the laser carrier (no diagonal, slowly varying).
    RotatingEffective,
}

/// Direction of [`rotating_frame_map`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FrameDirection {
    ToLab,
    ToRotating,
}

/// Frame, manifold and carrier data of a resonant Hamiltonian.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub frame: Frame,
    pub manifold: u32,
    pub laser_phase: f64,
    /// Common carrier ω_L = ω_C = ω_e in rad/s.
    pub carrier: f64,
}

impl HamiltonianSpec {
    /// Only exact resonance (`ω_L = ω_C = ω_e`) is supported.
    pub fn new(
        frame: Frame,
        manifold: i64,
        laser_phase: f64,
        omega_laser: f64,
        omega_cavity: f64,
        omega_excited: f64,
    ) -> Result<Self> {
        if manifold < 0 {
            return Err(Error::InvalidArgument(format!("manifold index {manifold} is negative")));
        }
        let manifold = u32::try_from(manifold)
            .map_err(|_| Error::InvalidArgument(format!("manifold index {manifold} too large")))?;
        if omega_laser != omega_cavity || omega_cavity != omega_excited {
            return Err(Error::InvalidArgument(format!(
                "carrier frequencies must be resonant, got ω_L = {omega_laser}, ω_C = {omega_cavity}, ω_e = {omega_excited}"
            )));
        }
        if !omega_laser.is_finite() || !laser_phase.is_finite() {
            return Err(Error::InvalidArgument(String::from("carrier and phase must be finite")));
        }
        Ok(Self { frame, manifold, laser_phase, carrier: omega_laser })
    }

    pub fn resonant(frame: Frame, manifold: u32, laser_phase: f64, carrier: f64) -> Self {
        Self { frame, manifold, laser_phase, carrier }
    }
}

fn check_coupling(name: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {value}")));
    }
    Ok(())
}

fn unit(phase: f64) -> C64 {
    C64::new(libm::cos(phase), libm::sin(phase))
}

/// Rotating-frame Hamiltonian with pump entry `Ω e^{iφ_L}` and Stokes entry
/// `G`, zero diagonal.
pub fn build_effective_hamiltonian(omega: f64, g: f64, laser_phase: f64) -> Result<HermitianMatrix> {
    build_effective_hamiltonian_phased(omega, g, laser_phase, 0.0)
}

/// As [`build_effective_hamiltonian`] with an extra phase on the Stokes
/// entry, `(e, g2)` element `G e^{iχ}`. A Stokes coupling with a negative
/// standing-wave sign is represented as `χ = π`.
pub fn build_effective_hamiltonian_phased(
    omega: f64,
    g: f64,
    pump_phase: f64,
    stokes_phase: f64,
) -> Result<HermitianMatrix> {
    check_coupling("pump Rabi frequency", omega)?;
    check_coupling("Stokes Rabi frequency", g)?;
    Ok(effective_unchecked(omega, g, pump_phase, stokes_phase))
}

pub(crate) fn effective_unchecked(omega: f64, g: f64, pump_phase: f64, stokes_phase: f64) -> HermitianMatrix {
    let pump = unit(pump_phase) * omega;
    let stokes = unit(stokes_phase) * g;
    let mut m = Matrix3::from_element(ZERO);
    m[(0, 1)] = pump;
    m[(1, 0)] = pump.conj();
    m[(1, 2)] = stokes;
    m[(2, 1)] = stokes.conj();
    HermitianMatrix(m)
}

/// Lab-frame projected Hamiltonian at time `t` for manifold `spec.manifold`.
///
/// Diagonal `(ω_C n, ω_e + ω_C n, ω_C (n+1))`, pump entry
/// `Ω e^{i(ω_L t + φ_L)}`, cavity entry `G √(n+1)`.
pub fn build_projected_hamiltonian(omega: f64, g: f64, t: f64, spec: &HamiltonianSpec) -> Result<HermitianMatrix> {
    if spec.frame != Frame::LabProjected {
        return Err(Error::InvalidArgument(String::from("projected Hamiltonian requires the lab frame")));
    }
    check_coupling("pump Rabi frequency", omega)?;
    check_coupling("Stokes Rabi frequency", g)?;
    let n = f64::from(spec.manifold);
    let w = spec.carrier;
    let pump = unit(w * t + spec.laser_phase) * omega;
    let cavity = C64::new(g * libm::sqrt(n + 1.0), 0.0);
    let mut m = Matrix3::from_element(ZERO);
    m[(0, 0)] = C64::new(w * n, 0.0);
    m[(1, 1)] = C64::new(w + w * n, 0.0);
    m[(2, 2)] = C64::new(w * (n + 1.0), 0.0);
    m[(0, 1)] = pump;
    m[(1, 0)] = pump.conj();
    m[(1, 2)] = cavity;
    m[(2, 1)] = cavity;
    Ok(HermitianMatrix(m))
}

/// Applies `R(t)` (to the lab frame) or `R(t)†` (to the rotating frame):
/// the `(e,n)` and `(g2,n+1)` amplitudes pick up `e^{∓iω_L t}`.
pub fn rotating_frame_map(
    state: &StateVector,
    t: f64,
    spec: &HamiltonianSpec,
    direction: FrameDirection,
) -> Result<StateVector> {
    let (n, v) = state.manifold_vector()?;
    if n != spec.manifold {
        return Err(Error::BasisMismatch(format!(
            "state lives in manifold {n}, spec describes manifold {}",
            spec.manifold
        )));
    }
    let sign = match direction {
        FrameDirection::ToLab => -1.0,
        FrameDirection::ToRotating => 1.0,
    };
    let phase = unit(sign * spec.carrier * t);
    Ok(StateVector::in_manifold(n, [v[0], v[1] * phase, v[2] * phase]))
}

/// Normalized null vector of the effective Hamiltonian:
/// `(G, 0, −Ω e^{−iφ_L}) / √(Ω² + G²)` over `(g1,0), (e,0), (g2,1)`.
pub fn dark_state(omega: f64, g: f64, laser_phase: f64) -> Result<StateVector> {
    check_coupling("pump Rabi frequency", omega)?;
    check_coupling("Stokes Rabi frequency", g)?;
    let h = effective_unchecked(omega, g, laser_phase, 0.0);
    let v = dark_vector(&h).ok_or(Error::DegenerateDarkState)?;
    Ok(StateVector::from_vector3(0, &v))
}

/// Dark vector read off an effective Hamiltonian: `(H[e,g2], 0, −H[e,g1])`,
/// normalized. `None` when both couplings vanish.
pub fn dark_vector(h: &HermitianMatrix) -> Option<Vector3<C64>> {
    let stokes = h.get(1, 2);
    let pump_lower = h.get(1, 0);
    let norm = libm::hypot(stokes.norm(), pump_lower.norm());
    if !(norm > 0.0) || !norm.is_finite() {
        return None;
    }
    Some(Vector3::new(stokes / norm, ZERO, -pump_lower / norm))
}

/// `ϑ = atan2(Ω_end, G_end)` in `[0, π/2]`.
pub fn mixing_angle(omega_end: f64, g_end: f64) -> Result<f64> {
    check_coupling("final pump amplitude", omega_end)?;
    check_coupling("final Stokes amplitude", g_end)?;
    if omega_end == 0.0 && g_end == 0.0 {
        return Err(Error::InvalidArgument(String::from("mixing angle undefined when both amplitudes vanish")));
    }
    Ok(libm::atan2(omega_end, g_end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
    use proptest::prelude::*;

    use crate::basis::{manifold_basis, AtomLevel, BasisLabel};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        let h = build_effective_hamiltonian(0.0, 0.0, 1.3).unwrap();
        assert!(h.entries().iter().all(|z| *z == ZERO));
    }

    #[test]
    fn real_symmetric_at_zero_phase() {
        let h = build_effective_hamiltonian(2.0, 3.0, 0.0).unwrap();
        assert_eq!(h.get(0, 1), c(2.0, 0.0));
        assert_eq!(h.get(1, 0), c(2.0, 0.0));
        assert_eq!(h.get(1, 2), c(3.0, 0.0));
        assert_eq!(h.get(2, 1), c(3.0, 0.0));
        for i in 0..3 {
            assert_eq!(h.get(i, i), ZERO);
        }
        assert_eq!(h.get(0, 2), ZERO);
        assert_eq!(h.get(2, 0), ZERO);
    }

    #[test]
    fn phase_pi_flips_pump_entry() {
        let h = build_effective_hamiltonian(1.0, 2.0, PI).unwrap();
        assert!((h.get(0, 1) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn negative_coupling_rejected() {
        assert!(matches!(build_effective_hamiltonian(-1.0, 1.0, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_effective_hamiltonian(1.0, -1.0, 0.0), Err(Error::InvalidArgument(_))));
        assert!(build_effective_hamiltonian(f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn projected_ground_manifold() {
        let w = 7.0;
        let spec = HamiltonianSpec::new(Frame::LabProjected, 0, 0.0, w, w, w).unwrap();
        let h = build_projected_hamiltonian(2.0, 3.0, 0.0, &spec).unwrap();
        assert_eq!(h.get(0, 1), c(2.0, 0.0));
        assert_eq!(h.get(1, 2), c(3.0, 0.0));
        assert_eq!(h.get(0, 0), c(0.0, 0.0));
        assert_eq!(h.get(1, 1), c(w, 0.0));
        assert_eq!(h.get(2, 2), c(w, 0.0));
        assert!(h.is_hermitian());
    }

    #[test]
    fn projected_fock_enhancement() {
        let spec = HamiltonianSpec::resonant(Frame::LabProjected, 3, 0.0, 5.0);
        let h = build_projected_hamiltonian(1.0, 1.5, 0.2, &spec).unwrap();
        assert_eq!(h.get(1, 2), c(3.0, 0.0));
    }

    #[test]
    fn projected_without_couplings_is_diagonal() {
        let spec = HamiltonianSpec::resonant(Frame::LabProjected, 1, 0.4, 5.0);
        let h = build_projected_hamiltonian(0.0, 0.0, 0.7, &spec).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(h.get(i, j).norm(), 0.0);
                }
            }
        }
        assert_eq!(h.get(0, 0).re, 5.0);
        assert_eq!(h.get(1, 1).re, 10.0);
        assert_eq!(h.get(2, 2).re, 10.0);
    }

    #[test]
    fn projected_rejects_rotating_frame_and_negative_manifold() {
        let spec = HamiltonianSpec::resonant(Frame::RotatingEffective, 0, 0.0, 1.0);
        assert!(build_projected_hamiltonian(1.0, 1.0, 0.0, &spec).is_err());
        assert!(HamiltonianSpec::new(Frame::LabProjected, -1, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(HamiltonianSpec::new(Frame::LabProjected, 0, 0.0, 1.0, 1.1, 1.0).is_err());
    }

    #[test]
    fn projected_matches_effective_through_frame_change() {
        // R† H_P R − i R† dR/dt = H_eff for n = 0.
        let (w, t, phi) = (11.0, 0.37, 0.9);
        let spec = HamiltonianSpec::resonant(Frame::LabProjected, 0, phi, w);
        let hp = build_projected_hamiltonian(1.3, 0.6, t, &spec).unwrap();
        let r = Matrix3::from_diagonal(&Vector3::new(c(1.0, 0.0), unit(-w * t), unit(-w * t)));
        let dr = Matrix3::from_diagonal(&Vector3::new(ZERO, c(0.0, -w) * unit(-w * t), c(0.0, -w) * unit(-w * t)));
        let heff = r.adjoint() * hp.entries() * r - r.adjoint() * dr * c(0.0, 1.0);
        let expected = build_effective_hamiltonian(1.3, 0.6, phi).unwrap();
        assert!((heff - expected.entries()).norm() < 1e-12);
    }

    #[test]
    fn frame_map_identity_cases() {
        let spec = HamiltonianSpec::resonant(Frame::RotatingEffective, 0, 0.0, 3.0e15);
        let s = StateVector::in_manifold(0, [c(0.6, 0.0), c(0.0, 0.48), c(-0.64, 0.0)]);
        let same = rotating_frame_map(&s, 0.0, &spec, FrameDirection::ToLab).unwrap();
        assert_eq!(same, s);

        let g1 = StateVector::basis_state(manifold_basis(0), 0).unwrap();
        let mapped = rotating_frame_map(&g1, 1.234e-6, &spec, FrameDirection::ToLab).unwrap();
        assert_eq!(mapped, g1);
    }

    #[test]
    fn frame_map_round_trip() {
        let spec = HamiltonianSpec::resonant(Frame::RotatingEffective, 2, 0.3, 2.4e15);
        let s = StateVector::in_manifold(2, [c(0.6, 0.0), c(0.0, 0.48), c(-0.64, 0.0)]);
        let lab = rotating_frame_map(&s, 4.2e-7, &spec, FrameDirection::ToLab).unwrap();
        assert!((lab.norm() - s.norm()).abs() < 1e-15);
        let back = rotating_frame_map(&lab, 4.2e-7, &spec, FrameDirection::ToRotating).unwrap();
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn frame_map_rejects_other_manifold() {
        let spec = HamiltonianSpec::resonant(Frame::RotatingEffective, 1, 0.0, 1.0);
        let s = StateVector::basis_state(manifold_basis(0), 0).unwrap();
        assert!(matches!(
            rotating_frame_map(&s, 1.0, &spec, FrameDirection::ToLab),
            Err(Error::BasisMismatch(_))
        ));
        let two = StateVector::new(
            alloc::vec![BasisLabel::single(AtomLevel::G1, 0), BasisLabel::single(AtomLevel::E, 0)],
            alloc::vec![c(1.0, 0.0), ZERO],
        )
        .unwrap();
        assert!(rotating_frame_map(&two, 1.0, &spec, FrameDirection::ToLab).is_err());
    }

    #[test]
    fn dark_state_limits() {
        let d = dark_state(0.0, 2.0, 0.7).unwrap();
        assert_eq!(d.amplitudes(), &[c(1.0, 0.0), ZERO, ZERO]);

        let d = dark_state(3.0, 3.0, 0.0).unwrap();
        let a = d.amplitudes();
        assert!((a[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(a[1], ZERO);
        assert!((a[2] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        assert_eq!(dark_state(0.0, 0.0, 0.0), Err(Error::DegenerateDarkState));
    }

    #[test]
    fn mixing_angle_examples() {
        assert_eq!(mixing_angle(0.0, 4.0).unwrap(), 0.0);
        assert!((mixing_angle(2.5, 2.5).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((mixing_angle(2.5, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(mixing_angle(0.0, 0.0).is_err());
        assert!(mixing_angle(-1.0, 1.0).is_err());
    }

    #[test]
    fn eigen_sorted_and_consistent() {
        let h = build_effective_hamiltonian(3.0, 4.0, 0.4).unwrap();
        let (vals, vecs) = h.eigen();
        assert!((vals[0] + 5.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12);
        assert!((vals[2] - 5.0).abs() < 1e-12);
        for (k, val) in vals.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            let hv = h.apply(&v);
            assert!((hv - v * c(*val, 0.0)).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn constructed_matrices_are_hermitian(
            omega in 0.0..1e7f64, g in 0.0..1e7f64, phi in -10.0..10.0f64,
            chi in -10.0..10.0f64, t in -1e-4..1e-4f64, n in 0u32..5,
        ) {
            prop_assert!(build_effective_hamiltonian(omega, g, phi).unwrap().is_hermitian());
            prop_assert!(build_effective_hamiltonian_phased(omega, g, phi, chi).unwrap().is_hermitian());
            let spec = HamiltonianSpec::resonant(Frame::LabProjected, n, phi, 2.4e15);
            prop_assert!(build_projected_hamiltonian(omega, g, t, &spec).unwrap().is_hermitian());
        }

        #[test]
        fn dark_state_is_null_vector(omega in 0.0..1e7f64, g in 0.0..1e7f64, phi in -10.0..10.0f64) {
            prop_assume!(omega + g > 0.0);
            let h = build_effective_hamiltonian(omega, g, phi).unwrap();
            let (_, v) = dark_state(omega, g, phi).unwrap().manifold_vector().unwrap();
            prop_assert!(h.apply(&v).norm() <= 1e-12 * (omega + g));
            prop_assert_eq!(v[1], ZERO);
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }
}
