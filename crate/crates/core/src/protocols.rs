//! Entanglement protocols built from sequential single-atom passages.
//!
//! Every stage is propagated in its own rotating frame. The states linked
//! across stages (`|g1,0⟩`, `|g2,0⟩` and the one-photon states they hand
//! over) carry the same bare energy, so rotating-frame amplitudes compose
//! directly; the overall lab-frame factor is reported only as metadata.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::basis::{manifold_basis, AtomLevel, BasisLabel, StateVector};
use crate::entanglement::{concurrence_of, reduced_purity, Subsystem};
use crate::error::{Error, Result};
use crate::fields::{
    classify_sequence, pulses_atom1, pulses_atom2, ClassifyOptions, FieldGeometry, PulseKind, PulsePair, Process,
    SequenceClass,
};
use crate::propagator::{propagate_sampled, StepControl, Trajectory, DEFAULT_SAMPLES};
use crate::C64;

use AtomLevel::{E, G1, G2};

/// Lab-frame factor multiplying the one-photon branch, kept symbolic.
pub const LAB_PHASE_FACTOR: &str = "exp(-i(omega_L t + phi_L))";

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    AtomPhoton,
    AtomAtom,
    PhotonPhoton,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::AtomPhoton => "atom-photon",
            ProtocolKind::AtomAtom => "atom-atom",
            ProtocolKind::PhotonPhoton => "photon-photon",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ProtocolOptions {
    pub control: StepControl,
    /// Output samples per stage trajectory.
    pub samples: usize,
    pub classify: ClassifyOptions,
    /// Excited-state population above which a warning is attached.
    pub excitation_threshold: f64,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self {
            control: StepControl::default(),
            samples: DEFAULT_SAMPLES,
            classify: ClassifyOptions::default(),
            excitation_threshold: 1e-2,
        }
    }
}

/// One term of the target superposition and its simulated amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub label: BasisLabel,
    pub amplitude: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    pub kind: ProtocolKind,
    /// Final rotating-frame state over the composite basis.
    pub final_state: StateVector,
    /// The two target branches, in the order `cos ϑ` term, `sin ϑ` term.
    pub branches: [Branch; 2],
    /// `2|ad − bc|` on the qubit block spanned by the branches; no
    /// renormalization, so leakage lowers it.
    pub concurrence: f64,
    /// Population outside the target pair of ground-state subspaces:
    /// excited levels plus any leftover photon.
    pub residual_excitation: f64,
    pub excited_population: f64,
    /// Largest excited-state population seen in any stage.
    pub peak_excited_population: f64,
    /// Photon population left in the shared cavity (atom–atom only).
    pub photon_population: Option<f64>,
    /// Purity of the subsystem that should factorize: the cavity for
    /// atom–atom, the atom for photon–photon.
    pub factorization_purity: Option<f64>,
    /// Realized mixing angle of the first passage.
    pub mixing_angle: f64,
    pub sequence: Option<SequenceClass>,
    /// Optical-path phase `α` of the second laser interaction.
    pub optical_phase: Option<f64>,
    /// `arg(sin-branch) − arg(cos-branch)` in `(−π, π]`; `None` when either
    /// branch is empty.
    pub relative_phase: Option<f64>,
    pub expected_relative_phase: f64,
    /// `|⟨target|final⟩|²` with the target built from the realized `ϑ`.
    pub target_fidelity: f64,
    pub lab_phase_factor: &'static str,
    pub warnings: Vec<String>,
    pub stages: Vec<Trajectory>,
}

impl ProtocolResult {
    pub fn populations(&self) -> Vec<f64> {
        self.final_state.populations()
    }

    /// Largest of `|ϕ_measured − ϕ_expected|` wrapped to `[0, π]`.
    pub fn phase_error(&self) -> Option<f64> {
        self.relative_phase.map(|p| libm::fabs(wrap_phase(p - self.expected_relative_phase)))
    }
}

/// Wraps an angle to `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = libm::remainder(x, TAU);
    if y <= -PI {
        y += TAU;
    }
    y
}

/// `α = 2π √(x0² + z0²) / λ`.
pub fn optical_path_phase(x0: f64, z0: f64, wavelength: f64) -> f64 {
    TAU * libm::hypot(x0, z0) / wavelength
}

fn phase_of(z: C64) -> f64 {
    libm::atan2(z.im, z.re)
}

fn unit(phase: f64) -> C64 {
    C64::new(libm::cos(phase), libm::sin(phase))
}

fn relative_phase(cos_branch: C64, sin_branch: C64) -> Option<f64> {
    const EMPTY: f64 = 1e-12;
    (cos_branch.norm_sqr() > EMPTY && sin_branch.norm_sqr() > EMPTY)
        .then(|| wrap_phase(phase_of(sin_branch) - phase_of(cos_branch)))
}

fn fidelity(state: &StateVector, target: &[(BasisLabel, C64)]) -> f64 {
    target.iter().map(|(l, c)| c.conj() * state.amplitude(l)).sum::<C64>().norm_sqr()
}

fn propagate_pulses(pulses: &PulsePair, initial: [C64; 3], options: &ProtocolOptions) -> Result<Trajectory> {
    propagate_sampled(
        |t| pulses.hamiltonian_at(t),
        &StateVector::in_manifold(0, initial),
        pulses.support,
        &options.control,
        options.samples,
    )
}

/// First passage: f-STIRAP from `|g1,0⟩` with its realized mixing angle.
struct FirstStage {
    pulses: PulsePair,
    trajectory: Trajectory,
    amplitudes: [C64; 3],
    mixing_angle: f64,
    sequence: Option<SequenceClass>,
    warnings: Vec<String>,
}

fn first_stage(geom: &FieldGeometry, options: &ProtocolOptions) -> Result<FirstStage> {
    geom.validate()?;
    let pulses = pulses_atom1(geom);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let trajectory = propagate_pulses(&pulses, [one, zero, zero], options)?;
    let amplitudes = trajectory.amplitudes[trajectory.len() - 1];

    let mut warnings = Vec::new();
    let (mixing_angle, sequence) = match classify_sequence(&pulses, &options.classify) {
        Ok(class) => {
            if class.process == Process::Incomplete {
                warnings.push(format!(
                    "pulse sequence does not end in a stable ratio (spread {:.3})",
                    class.ratio_spread
                ));
            }
            (class.mixing_angle, Some(class))
        }
        Err(Error::ZeroPulse(PulseKind::Pump)) => {
            warnings.push(String::from("pump pulse is identically zero; mixing angle taken as 0"));
            (0.0, None)
        }
        Err(Error::ZeroPulse(PulseKind::Stokes)) => {
            warnings.push(String::from("Stokes pulse is identically zero; mixing angle taken as pi/2"));
            (FRAC_PI_2, None)
        }
        Err(e) => return Err(e),
    };
    if mixing_angle.is_nan() {
        warnings.push(String::from("no tail band found; mixing angle undefined"));
    }
    Ok(FirstStage { pulses, trajectory, amplitudes, mixing_angle, sequence, warnings })
}

fn check_excitation(excited: f64, options: &ProtocolOptions, warnings: &mut Vec<String>) {
    if excited > options.excitation_threshold {
        warnings.push(format!(
            "final excited population {excited:.3e} exceeds threshold {:.3e}",
            options.excitation_threshold
        ));
    }
}

/// Atom–photon entanglement: one atom from `|g1,0⟩` through the cavity and
/// the laser, ideally ending in `cos ϑ |g1,0⟩ − e^{−iφ_L} sin ϑ |g2,1⟩`.
pub fn atom_photon_protocol(geom: &FieldGeometry, options: &ProtocolOptions) -> Result<ProtocolResult> {
    let FirstStage { pulses, trajectory, amplitudes: [a, e, c], mixing_angle, sequence, mut warnings } =
        first_stage(geom, options)?;
    let basis = manifold_basis(0);
    let final_state = StateVector::in_manifold(0, [a, e, c]);
    let excited = e.norm_sqr();
    check_excitation(excited, options, &mut warnings);

    // Dark state (G e^{iχ}, 0, −Ω e^{−iφ}) up to e^{iχ}.
    let expected = wrap_phase(PI - pulses.pump_phase - pulses.stokes_phase);
    let target = if mixing_angle.is_nan() {
        Vec::new()
    } else {
        vec![
            (basis[0].clone(), C64::new(libm::cos(mixing_angle), 0.0)),
            (basis[2].clone(), unit(expected) * libm::sin(mixing_angle)),
        ]
    };
    let zero = C64::new(0.0, 0.0);
    Ok(ProtocolResult {
        kind: ProtocolKind::AtomPhoton,
        target_fidelity: fidelity(&final_state, &target),
        branches: [
            Branch { label: basis[0].clone(), amplitude: a },
            Branch { label: basis[2].clone(), amplitude: c },
        ],
        // Atom {g1, g2} ⊗ photon {0, 1}: only |g1,0⟩ and |g2,1⟩ are reachable.
        concurrence: concurrence_of([a, zero, zero, c]).min(1.0),
        residual_excitation: excited,
        excited_population: excited,
        peak_excited_population: trajectory.peak_population(1),
        photon_population: None,
        factorization_purity: None,
        mixing_angle,
        sequence,
        optical_phase: None,
        relative_phase: relative_phase(a, c),
        expected_relative_phase: expected,
        lab_phase_factor: LAB_PHASE_FACTOR,
        warnings,
        stages: vec![trajectory],
        final_state,
    })
}

/// Labels of the atom–atom protocol: atoms ordered `[atom 2, atom 1]`, one
/// cavity mode.
pub fn atom_atom_basis() -> Vec<BasisLabel> {
    let l = |a2, a1, n| BasisLabel::new(vec![a2, a1], vec![n]);
    vec![l(G2, G1, 0), l(G2, E, 0), l(G1, G2, 0), l(E, G2, 0), l(G2, G2, 1)]
}

/// Atom–atom entanglement through a shared cavity.
///
/// The first atom prepares `a|g1,0⟩ + c|g2,1⟩`; the second atom, starting
/// in `g2`, then meets the laser before the cavity. Its `|g2,0⟩` branch is
/// stationary, its `|g2,1⟩` branch undergoes STIRAP to `|g1,0⟩`, leaving
/// the cavity empty and the atoms in `cos ϑ |g2 g1⟩ + sin ϑ |g1 g2⟩`.
pub fn atom_atom_protocol(
    geom1: &FieldGeometry,
    geom2: &FieldGeometry,
    options: &ProtocolOptions,
) -> Result<ProtocolResult> {
    geom2.validate()?;
    let first = first_stage(geom1, options)?;
    let pulses2 = pulses_atom2(geom2);
    if pulses2.support.0 <= first.pulses.support.1 {
        return Err(Error::OverlappingSupports {
            first_end: first.pulses.support.1,
            second_start: pulses2.support.0,
        });
    }
    let [a, e, c] = first.amplitudes;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let second = propagate_pulses(&pulses2, [zero, zero, one], options)?;
    let [u1, u2, u3] = second.amplitudes[second.len() - 1];

    let basis = atom_atom_basis();
    let amplitudes = vec![a, e, c * u1, c * u2, c * u3];
    let final_state = StateVector::new(basis.clone(), amplitudes)?;
    let excited = final_state.population_where(BasisLabel::is_excited);
    let photon = final_state.population_where(|l| l.photons[0] > 0);
    let mut warnings = first.warnings;
    check_excitation(excited, options, &mut warnings);

    // Stage 1 leaves −e^{−i(φ1+χ1)} on |g2,1⟩; the second STIRAP maps
    // |g2,1⟩ → −e^{i(φ2+χ2)} |g1,0⟩.
    let expected = wrap_phase(
        pulses2.pump_phase + pulses2.stokes_phase - first.pulses.pump_phase - first.pulses.stokes_phase,
    );
    let theta = first.mixing_angle;
    let target = if theta.is_nan() {
        Vec::new()
    } else {
        vec![
            (basis[0].clone(), C64::new(libm::cos(theta), 0.0)),
            (basis[2].clone(), unit(expected) * libm::sin(theta)),
        ]
    };
    let (cos_branch, sin_branch) = (a, c * u1);
    Ok(ProtocolResult {
        kind: ProtocolKind::AtomAtom,
        target_fidelity: fidelity(&final_state, &target),
        branches: [
            Branch { label: basis[0].clone(), amplitude: cos_branch },
            Branch { label: basis[2].clone(), amplitude: sin_branch },
        ],
        // Atoms [2, 1] in {g1, g2}² with the cavity empty:
        // |g1 g1⟩ and |g2 g2⟩ are unreachable.
        concurrence: concurrence_of([zero, sin_branch, cos_branch, zero]).min(1.0),
        residual_excitation: excited + photon,
        excited_population: excited,
        peak_excited_population: first.trajectory.peak_population(1).max(second.peak_population(1)),
        photon_population: Some(photon),
        factorization_purity: Some(reduced_purity(&final_state, Subsystem::Cavity(0))?),
        mixing_angle: theta,
        sequence: first.sequence,
        optical_phase: None,
        relative_phase: relative_phase(cos_branch, sin_branch),
        expected_relative_phase: expected,
        lab_phase_factor: LAB_PHASE_FACTOR,
        warnings,
        stages: vec![first.trajectory, second],
        final_state,
    })
}

/// Labels of the photon–photon protocol: one atom, modes ordered
/// `[cavity 2, cavity 1]`.
pub fn photon_photon_basis() -> Vec<BasisLabel> {
    let l = |a, n2, n1| BasisLabel::new(vec![a], vec![n2, n1]);
    vec![l(G1, 0, 0), l(E, 0, 0), l(G2, 1, 0), l(G2, 0, 1)]
}

/// Photon–photon entanglement of two cavities by one atom.
///
/// After f-STIRAP with cavity 1 the atom crosses cavity 2 and its laser in
/// the counterintuitive order. The `|g1⟩` branch is transferred to
/// `|g2⟩|1⁽²⁾⟩` while `|g2⟩` is untouched, leaving the atom in `g2` and the
/// modes in `cos ϑ |1,0⟩ + e^{iα} sin ϑ |0,1⟩`. The laser reaches the
/// second interaction with phase `φ_L + α`, where `φ_L` is the first
/// geometry's laser phase, `α = 2π √(x0² + z0²)/λ`, `x0` is the second
/// geometry's cavity separation and `z0` the first geometry's axis offset.
pub fn photon_photon_protocol(
    geom1: &FieldGeometry,
    geom2: &FieldGeometry,
    options: &ProtocolOptions,
) -> Result<ProtocolResult> {
    geom2.validate()?;
    let first = first_stage(geom1, options)?;
    let alpha = optical_path_phase(geom2.cavity_separation, geom1.axis_offset, geom1.wavelength);
    let mut pulses2 = pulses_atom1(geom2);
    pulses2.pump_phase = geom1.laser_phase + alpha;

    let [a, e, c] = first.amplitudes;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // Cavity 2 starts empty: |g1⟩ and |e⟩ enter its n = 0 manifold,
    // |g2, 0⁽²⁾⟩ is stationary.
    let from_g1 = propagate_pulses(&pulses2, [one, zero, zero], options)?;
    let from_e = propagate_pulses(&pulses2, [zero, one, zero], options)?;
    let v = from_g1.amplitudes[from_g1.len() - 1];
    let w = from_e.amplitudes[from_e.len() - 1];

    let basis = photon_photon_basis();
    let amplitudes = vec![a * v[0] + e * w[0], a * v[1] + e * w[1], a * v[2] + e * w[2], c];
    let final_state = StateVector::new(basis.clone(), amplitudes)?;
    let excited = final_state.population_where(BasisLabel::is_excited);
    let mut warnings = first.warnings;
    check_excitation(excited, options, &mut warnings);

    // Stage 1 leaves −e^{−i(φ1+χ1)} on |g2,1⁽¹⁾⟩; the second STIRAP maps
    // |g1,0⁽²⁾⟩ → −e^{−i(φ1+α+χ2)} |g2,1⁽²⁾⟩.
    let expected = wrap_phase(alpha + pulses2.stokes_phase - first.pulses.stokes_phase);
    let theta = first.mixing_angle;
    let target = if theta.is_nan() {
        Vec::new()
    } else {
        vec![
            (basis[2].clone(), C64::new(libm::cos(theta), 0.0)),
            (basis[3].clone(), unit(expected) * libm::sin(theta)),
        ]
    };
    let (cos_branch, sin_branch) = (final_state.amplitudes()[2], c);
    // Both stage-2 runs share the sample grid.
    let stage2_excited = from_g1
        .amplitudes
        .iter()
        .zip(&from_e.amplitudes)
        .map(|(x, y)| (a * x[1] + e * y[1]).norm_sqr())
        .fold(0.0, f64::max);
    let peak_excited = first.trajectory.peak_population(1).max(stage2_excited);
    Ok(ProtocolResult {
        kind: ProtocolKind::PhotonPhoton,
        target_fidelity: fidelity(&final_state, &target),
        branches: [
            Branch { label: basis[2].clone(), amplitude: cos_branch },
            Branch { label: basis[3].clone(), amplitude: sin_branch },
        ],
        // Modes [2, 1] in {0, 1}² with the atom in g2: |0,0⟩ and |1,1⟩
        // are unreachable.
        concurrence: concurrence_of([zero, sin_branch, cos_branch, zero]).min(1.0),
        residual_excitation: excited,
        excited_population: excited,
        peak_excited_population: peak_excited,
        photon_population: None,
        factorization_purity: Some(reduced_purity(&final_state, Subsystem::Atom(0))?),
        mixing_angle: theta,
        sequence: first.sequence,
        optical_phase: Some(alpha),
        relative_phase: relative_phase(cos_branch, sin_branch),
        expected_relative_phase: expected,
        lab_phase_factor: LAB_PHASE_FACTOR,
        warnings,
        stages: vec![first.trajectory, from_g1],
        final_state,
    })
}
