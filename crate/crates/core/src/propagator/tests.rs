use super::*;
use crate::basis::manifold_basis;
use crate::fields::{pulses_atom1, PulsePair};
use crate::hamiltonian::{build_effective_hamiltonian, build_projected_hamiltonian, Frame, HamiltonianSpec};
use crate::presets;

fn g1() -> StateVector {
    StateVector::basis_state(manifold_basis(0), 0).unwrap()
}

fn white_dot() -> PulsePair {
    pulses_atom1(&presets::half_stirap_geometry())
}

#[test]
fn zero_hamiltonian_is_identity() {
    let psi = StateVector::in_manifold(0, [C64::new(0.6, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -0.8)]);
    let tr = propagate(|_| HermitianMatrix::zero(), &psi, (0.0, 1.0), &StepControl::default()).unwrap();
    assert_eq!(tr.final_state(), psi);
    assert_eq!(tr.norm_drift, 0.0);
    let r = reference_propagate(|_| HermitianMatrix::zero(), &psi, (0.0, 1.0), 0.25).unwrap();
    assert_eq!(r, psi);
}

/// `|g1,0⟩` under constant `Ω`, `G` (φ = 0): with `Λ = √(Ω²+G²)`,
/// `c1 = (G² + Ω² cos Λt)/Λ²`, `c2 = −i Ω sin Λt / Λ`, `c3 = Ω G (cos Λt − 1)/Λ²`.
fn constant_coupling_solution(omega: f64, g: f64, t: f64) -> [C64; 3] {
    let l2 = omega * omega + g * g;
    let l = l2.sqrt();
    let (s, c) = (l * t).sin_cos();
    [
        C64::new((g * g + omega * omega * c) / l2, 0.0),
        C64::new(0.0, -omega * s / l),
        C64::new(omega * g * (c - 1.0) / l2, 0.0),
    ]
}

#[test]
fn constant_hamiltonian_matches_closed_form() {
    let (omega, g) = (3.0e6, 4.0e6);
    let h = build_effective_hamiltonian(omega, g, 0.0).unwrap();
    let t_end = 7.3e-6;
    let control = StepControl { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
    let tr = propagate_sampled(|_| h, &g1(), (0.0, t_end), &control, 50).unwrap();
    for (t, a) in tr.times.iter().zip(&tr.amplitudes) {
        let exact = constant_coupling_solution(omega, g, *t);
        for i in 0..3 {
            assert!((a[i] - exact[i]).norm() < 1e-8, "t = {t}, component {i}");
        }
    }
    let r = reference_propagate(|_| h, &g1(), (0.0, t_end), 1e-10).unwrap();
    let exact = constant_coupling_solution(omega, g, t_end);
    for (got, want) in r.amplitudes().iter().zip(&exact) {
        // Exact exponential of a constant generator: only rounding error.
        assert!((got - want).norm() < 1e-9);
    }
}

#[test]
fn half_stirap_final_populations() {
    let p = white_dot();
    let tr = propagate(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default()).unwrap();
    let [pg1, pe, pg2] = tr.final_populations();
    // Independent DOP853 integration at rtol 1e-13.
    assert!((pg1 - 0.496_074_71).abs() < 1e-6, "{pg1}");
    assert!((pe - 0.001_037_36).abs() < 1e-6, "{pe}");
    assert!((pg2 - 0.502_887_92).abs() < 1e-6, "{pg2}");
    assert!(tr.norm_drift <= 1e-9);
    for pops in &tr.populations {
        assert!((pops.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }
    assert_eq!(tr.len(), DEFAULT_SAMPLES);
    assert_eq!(tr.times[0], p.support.0);
    assert_eq!(*tr.times.last().unwrap(), p.support.1);
}

#[test]
fn reference_agrees_on_half_stirap() {
    let p = white_dot();
    let dt = 0.99 * REFERENCE_MAX_PHASE_STEP / p.stokes.peak.max(p.pump.peak);
    let fast = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default(), 2).unwrap();
    let slow = reference_propagate(|t| p.hamiltonian_at(t), &g1(), p.support, dt).unwrap();
    for (a, b) in fast.final_populations().iter().zip(slow.populations()) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
    assert!((slow.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn reference_errors() {
    let h = build_effective_hamiltonian(1.0, 1.0, 0.0).unwrap();
    assert!(matches!(reference_propagate(|_| h, &g1(), (0.0, 1.0), 0.0), Err(Error::InvalidArgument(_))));
    assert!(reference_propagate(|_| h, &g1(), (0.0, 1.0), -1.0).is_err());
    assert!(matches!(reference_propagate(|_| h, &g1(), (0.0, 1.0), 0.1), Err(Error::StepTooLarge { .. })));
}

#[test]
fn reference_step_is_unitary() {
    let h = build_effective_hamiltonian(2.0e6, 1.0e6, 0.3).unwrap();
    let mut psi = g1();
    for _ in 0..20 {
        psi = reference_propagate(|_| h, &psi, (0.0, 4e-10), 4e-10).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn loose_tolerance_is_reported_as_norm_drift() {
    let p = white_dot();
    let loose = StepControl { rel_tol: 1e-2, abs_tol: 1e-2, ..Default::default() };
    let err = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &loose, 2).unwrap_err();
    assert!(matches!(err, Error::NormDrift { .. }), "{err:?}");
}

#[test]
fn non_finite_hamiltonian_is_error() {
    let h = |t: f64| {
        let o = if t > 0.5 { f64::NAN } else { 1.0 };
        crate::hamiltonian::effective_unchecked(o, 1.0, 0.0, 0.0)
    };
    assert!(matches!(
        propagate(h, &g1(), (0.0, 1.0), &StepControl::default()),
        Err(Error::NonFiniteHamiltonian { .. })
    ));
    assert!(matches!(reference_propagate(h, &g1(), (0.0, 1.0), 1e-4), Err(Error::NonFiniteHamiltonian { .. })));
}

#[test]
fn initial_state_checks() {
    let h = |_| HermitianMatrix::zero();
    let bad = StateVector::in_manifold(0, [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    assert!(matches!(propagate(h, &bad, (0.0, 1.0), &StepControl::default()), Err(Error::NotNormalized { .. })));
    let other = StateVector::new(alloc::vec![crate::basis::BasisLabel::single(crate::AtomLevel::G1, 0)], alloc::vec![C64::new(1.0, 0.0)]).unwrap();
    assert!(matches!(propagate(h, &other, (0.0, 1.0), &StepControl::default()), Err(Error::BasisMismatch(_))));
    let no_tol = StepControl { rel_tol: 0.0, ..Default::default() };
    assert!(propagate(h, &g1(), (0.0, 1.0), &no_tol).is_err());
}

#[test]
fn backward_propagation_restores_initial_state() {
    let p = white_dot();
    let fwd = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default(), 2).unwrap();
    let back = propagate_sampled(
        |t| p.hamiltonian_at(t),
        &fwd.final_state(),
        (p.support.1, p.support.0),
        &StepControl::default(),
        2,
    )
    .unwrap();
    let start = g1();
    for (a, b) in back.final_state().amplitudes().iter().zip(start.amplitudes()) {
        assert!((a - b).norm() < 1e-6);
    }
}

#[test]
fn laser_phase_leaves_populations_unchanged() {
    let p = white_dot();
    let base = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default(), 2).unwrap();
    for phi in [0.4, 1.7, -2.9] {
        let q = p.with_extra_pump_phase(phi);
        let tr = propagate_sampled(|t| q.hamiltonian_at(t), &g1(), q.support, &StepControl::default(), 2).unwrap();
        for (a, b) in tr.final_populations().iter().zip(base.final_populations()) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn lab_and_rotating_frames_agree_on_populations() {
    // Carrier kept low enough to resolve; the frame map is exact for any ω.
    let p = white_dot();
    let carrier = 2.0e7;
    let spec = HamiltonianSpec::resonant(Frame::LabProjected, 0, p.pump_phase, carrier);
    let lab = |t: f64| build_projected_hamiltonian(p.pump_at(t), p.stokes_at(t), t, &spec).unwrap();
    let control = StepControl { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
    let a = propagate_sampled(lab, &g1(), p.support, &control, 21).unwrap();
    let b = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &control, 21).unwrap();
    for (x, y) in a.populations.iter().zip(&b.populations) {
        for i in 0..3 {
            assert!((x[i] - y[i]).abs() < 1e-7);
        }
    }
    // Amplitudes differ exactly by R(t).
    let rot = HamiltonianSpec { frame: Frame::RotatingEffective, ..spec };
    let k = 13;
    let mapped = crate::hamiltonian::rotating_frame_map(
        &b.state(k),
        b.times[k],
        &rot,
        crate::hamiltonian::FrameDirection::ToLab,
    )
    .unwrap();
    for (x, y) in mapped.amplitudes().iter().zip(a.state(k).amplitudes()) {
        assert!((x - y).norm() < 1e-6);
    }
}

#[test]
fn dark_state_diagnostics_on_half_stirap() {
    let p = white_dot();
    let tr = propagate(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default()).unwrap();
    let diag = instantaneous_eigen_diagnostics(|t| p.hamiltonian_at(t), &tr);
    assert_eq!(diag.len(), tr.len());
    for s in &diag {
        assert!(s.eigenvalues[1].abs() <= 1e-10 * s.coupling_sum.max(f64::MIN_POSITIVE));
    }
    let (lo, hi) = p.overlap_window(0.05).unwrap();
    let min_overlap = diag
        .iter()
        .filter(|s| s.time >= lo && s.time <= hi)
        .map(|s| s.dark_overlap.unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(min_overlap > 0.99, "{min_overlap}");
}

#[test]
fn dark_overlap_is_one_without_pump() {
    let mut g = presets::half_stirap_geometry();
    g.omega0 = 0.0;
    let p = pulses_atom1(&g);
    let tr = propagate_sampled(|t| p.hamiltonian_at(t), &g1(), p.support, &StepControl::default(), 101).unwrap();
    for s in instantaneous_eigen_diagnostics(|t| p.hamiltonian_at(t), &tr) {
        assert!((s.dark_overlap.unwrap() - 1.0).abs() < 1e-12);
    }
    let zero = instantaneous_eigen_diagnostics(|_| HermitianMatrix::zero(), &tr);
    assert!(zero.iter().all(|s| s.dark_overlap.is_none()));
}

#[test]
fn adiabaticity_products() {
    let g = presets::half_stirap_geometry();
    let r = adiabaticity_check(&g, None);
    assert!((r.pump_area_product - 50.0).abs() < 1e-12);
    assert!((r.stokes_area_product - 50.0).abs() < 1e-12);
    assert_eq!(r.verdict, Verdict::Adiabatic);
    assert_eq!(r.interaction_time, g.cavity_transit());

    let fast = FieldGeometry { speed: 10.0 * g.speed, ..g };
    let rf = adiabaticity_check(&fast, None);
    assert!((rf.pump_area_product - 5.0).abs() < 1e-12);
    assert!((rf.stokes_area_product - 5.0).abs() < 1e-12);
    assert_eq!(rf.verdict, Verdict::Marginal);
    let slow_pulses = FieldGeometry { speed: 100.0 * g.speed, ..g };
    assert_eq!(adiabaticity_check(&slow_pulses, None).verdict, Verdict::Diabatic);
}

#[test]
fn microwave_interaction_product() {
    let g = FieldGeometry {
        g0: 0.15e6,
        omega0: 0.15e6,
        cavity_waist: 6e-3,
        laser_waist: 6e-3,
        speed: 100.0,
        ..presets::base_geometry()
    };
    let r = adiabaticity_check(&g, Some(100e-6));
    assert!((r.interaction_product - 15.0).abs() < 1e-12);
}

use crate::fields::FieldGeometry;
