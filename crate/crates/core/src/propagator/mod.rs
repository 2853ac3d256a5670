//! Time-dependent Schrödinger propagation on one manifold.
//!
//! [`propagate`] is an adaptive Dormand–Prince 5(4) integrator with local
//! error control. [`reference_propagate`] is an independent oracle that
//! multiplies exact exponentials of midpoint Hamiltonian samples.

mod diagnostics;
mod dopri;
mod reference;

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::Vector3;

pub use diagnostics::{
    adiabaticity_check, adiabaticity_check_with, instantaneous_eigen_diagnostics, AdiabaticityReport,
    AdiabaticityThresholds, EigenSample, Verdict,
};
pub use reference::{reference_propagate, REFERENCE_MAX_PHASE_STEP};

use crate::basis::{manifold_basis, BasisLabel, StateVector, NORM_TOLERANCE};
use crate::error::{Error, Result};
use crate::hamiltonian::HermitianMatrix;
use crate::C64;

/// Default number of uniformly spaced output samples.
pub const DEFAULT_SAMPLES: usize = 2000;

/// Step-size control of the adaptive integrator.
///
/// The accumulated norm drift of Dormand–Prince 5(4) on these problems is
/// roughly `100 × rel_tol`, so the defaults (`1e-11`, `1e-13`) keep it an
/// order of magnitude below the `1e-9` failure threshold.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step; defaults to 1/200 of the window.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rel_tol: 1e-11, abs_tol: 1e-13, max_step: None, max_steps: 10_000_000 }
    }
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.rel_tol.is_finite()
            && self.abs_tol.is_finite()
            && self.max_step.is_none_or(|h| h > 0.0 && h.is_finite())
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(String::from(
                "step control needs positive finite tolerances, max_step and max_steps",
            )))
        }
    }
}

/// Sampled solution of one propagation.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub manifold: u32,
    pub times: Vec<f64>,
    pub amplitudes: Vec<[C64; 3]>,
    pub populations: Vec<[f64; 3]>,
    /// Largest `|‖ψ‖ − 1|` over all accepted steps.
    pub norm_drift: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn basis(&self) -> Vec<BasisLabel> {
        manifold_basis(self.manifold)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, index: usize) -> StateVector {
        StateVector::in_manifold(self.manifold, self.amplitudes[index])
    }

    pub fn final_state(&self) -> StateVector {
        self.state(self.len() - 1)
    }

    pub fn final_populations(&self) -> [f64; 3] {
        self.populations[self.len() - 1]
    }

    /// Largest population of basis state `index` over the samples.
    pub fn peak_population(&self, index: usize) -> f64 {
        self.populations.iter().map(|p| p[index]).fold(0.0, f64::max)
    }
}

/// [`propagate_sampled`] with [`DEFAULT_SAMPLES`] output samples.
pub fn propagate<F>(hamiltonian: F, initial: &StateVector, window: (f64, f64), control: &StepControl) -> Result<Trajectory>
where
    F: Fn(f64) -> HermitianMatrix,
{
    propagate_sampled(hamiltonian, initial, window, control, DEFAULT_SAMPLES)
}

/// Integrates `i dψ/dt = H(t) ψ` from `window.0` to `window.1` (either
/// direction) and records `samples` uniformly spaced states, endpoints
/// included. Steps are clipped to land on every sample time, so each
/// recorded state is an integrator state.
///
/// No renormalization is applied: a norm drift above `1e-9` is reported as
/// [`Error::NormDrift`].
pub fn propagate_sampled<F>(
    hamiltonian: F,
    initial: &StateVector,
    window: (f64, f64),
    control: &StepControl,
    samples: usize,
) -> Result<Trajectory>
where
    F: Fn(f64) -> HermitianMatrix,
{
    control.validate()?;
    let (manifold, y0) = initial.manifold_vector()?;
    initial.require_normalized()?;
    let (t0, t1) = window;
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(String::from("propagation window must be finite")));
    }
    let samples = samples.max(2);
    let span = libm::fabs(t1 - t0);
    let direction = if t1 >= t0 { 1.0 } else { -1.0 };
    let sample_time = |k: usize| {
        if k == samples - 1 {
            t1
        } else {
            t0 + (t1 - t0) * (k as f64) / ((samples - 1) as f64)
        }
    };

    let mut out = Trajectory {
        manifold,
        times: Vec::with_capacity(samples),
        amplitudes: Vec::with_capacity(samples),
        populations: Vec::with_capacity(samples),
        norm_drift: libm::fabs(y0.norm() - 1.0),
        steps_accepted: 0,
        steps_rejected: 0,
    };
    let record = |out: &mut Trajectory, t: f64, y: &Vector3<C64>| {
        out.times.push(t);
        out.amplitudes.push([y[0], y[1], y[2]]);
        out.populations.push([y[0].norm_sqr(), y[1].norm_sqr(), y[2].norm_sqr()]);
    };

    let mut t = t0;
    let mut y = y0;
    record(&mut out, t, &y);
    if span == 0.0 {
        for _ in 1..samples {
            record(&mut out, t, &y);
        }
        return Ok(out);
    }

    let max_step = control.max_step.unwrap_or(span / 200.0).min(span);
    let tiny = span * 1e-13;
    let mut h = max_step * 0.1;
    let mut k1 = dopri::derivative(&hamiltonian, t, &y)?;
    let mut last_rejected = false;

    for k in 1..samples {
        let target = sample_time(k);
        while libm::fabs(target - t) > 0.0 {
            let remaining = libm::fabs(target - t);
            let mut size = h.min(max_step);
            let clipped = size >= remaining - tiny;
            if clipped {
                size = remaining;
            }
            let trial = dopri::step(&hamiltonian, t, &y, &k1, direction * size, control.rel_tol, control.abs_tol)?;
            let err = trial.error;
            if !err.is_finite() {
                return Err(Error::IntegrationFailure { t, reason: String::from("non-finite error estimate") });
            }
            if err <= 1.0 {
                t = if clipped { target } else { t + direction * size };
                y = trial.y;
                k1 = trial.k7;
                out.steps_accepted += 1;
                let drift = libm::fabs(y.norm() - 1.0);
                out.norm_drift = out.norm_drift.max(drift);
                if drift > NORM_TOLERANCE {
                    return Err(Error::NormDrift { drift, tolerance: NORM_TOLERANCE, t });
                }
                let mut factor = if err == 0.0 { 5.0 } else { 0.9 * libm::pow(err, -0.2) };
                factor = factor.clamp(0.2, 5.0);
                if last_rejected {
                    factor = factor.min(1.0);
                }
                let proposal = size * factor;
                h = if clipped { h.max(proposal) } else { proposal };
                last_rejected = false;
            } else {
                let factor = (0.9 * libm::pow(err, -0.2)).max(0.2);
                h = size * factor;
                out.steps_rejected += 1;
                last_rejected = true;
            }
            if h < tiny {
                return Err(Error::IntegrationFailure { t, reason: String::from("step size underflow") });
            }
            if out.steps_accepted + out.steps_rejected > control.max_steps {
                return Err(Error::IntegrationFailure { t, reason: String::from("maximum number of steps exceeded") });
            }
        }
        record(&mut out, t, &y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
