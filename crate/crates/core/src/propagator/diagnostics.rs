use alloc::vec::Vec;

use nalgebra::Vector3;

use crate::fields::FieldGeometry;
use crate::hamiltonian::{dark_vector, HermitianMatrix};
use crate::propagator::Trajectory;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Adiabatic,
    Marginal,
    Diabatic,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Adiabatic => "adiabatic",
            Verdict::Marginal => "marginal",
            Verdict::Diabatic => "diabatic",
        }
    }
}

/// Verdict thresholds on the smaller of `Ω0 T_L` and `G0 T_C`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AdiabaticityThresholds {
    pub adiabatic: f64,
    pub marginal: f64,
}

impl Default for AdiabaticityThresholds {
    fn default() -> Self {
        Self { adiabatic: 10.0, marginal: 3.0 }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AdiabaticityReport {
    /// `Ω0 · T_L`
    pub pump_area_product: f64,
    /// `G0 · T_C`
    pub stokes_area_product: f64,
    /// `G0 · T_int`
    pub interaction_product: f64,
    pub laser_transit: f64,
    pub cavity_transit: f64,
    pub interaction_time: f64,
    pub verdict: Verdict,
}

/// Pulse-area products with default thresholds (adiabatic ≥ 10,
/// marginal ≥ 3). `t_int` defaults to `max(T_L, T_C)`.
pub fn adiabaticity_check(geom: &FieldGeometry, t_int: Option<f64>) -> AdiabaticityReport {
    adiabaticity_check_with(geom, t_int, &AdiabaticityThresholds::default())
}

pub fn adiabaticity_check_with(
    geom: &FieldGeometry,
    t_int: Option<f64>,
    thresholds: &AdiabaticityThresholds,
) -> AdiabaticityReport {
    let laser_transit = geom.laser_transit();
    let cavity_transit = geom.cavity_transit();
    let interaction_time = t_int.unwrap_or(laser_transit.max(cavity_transit));
    let pump = geom.omega0 * laser_transit;
    let stokes = geom.g0 * cavity_transit;
    let weakest = pump.min(stokes);
    let verdict = if weakest >= thresholds.adiabatic {
        Verdict::Adiabatic
    } else if weakest >= thresholds.marginal {
        Verdict::Marginal
    } else {
        Verdict::Diabatic
    };
    AdiabaticityReport {
        pump_area_product: pump,
        stokes_area_product: stokes,
        interaction_product: geom.g0 * interaction_time,
        laser_transit,
        cavity_transit,
        interaction_time,
        verdict,
    }
}

/// Instantaneous spectrum and dark-state population at one sample.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EigenSample {
    pub time: f64,
    /// Ascending; the middle one is the dark-state (zero) eigenvalue.
    pub eigenvalues: [f64; 3],
    /// `|⟨D(t)|ψ(t)⟩|²`, or `None` where both couplings vanish.
    pub dark_overlap: Option<f64>,
    /// `|Ω(t)| + |G(t)|` read off the Hamiltonian.
    pub coupling_sum: f64,
}

/// Evaluates the instantaneous eigenvalues and dark-state overlap at every
/// trajectory sample. Expects a rotating-frame Hamiltonian.
pub fn instantaneous_eigen_diagnostics<F>(hamiltonian: F, trajectory: &Trajectory) -> Vec<EigenSample>
where
    F: Fn(f64) -> HermitianMatrix,
{
    trajectory
        .times
        .iter()
        .zip(&trajectory.amplitudes)
        .map(|(&t, a)| {
            let h = hamiltonian(t);
            let (eigenvalues, _) = h.eigen();
            let psi = Vector3::new(a[0], a[1], a[2]);
            let dark_overlap = dark_vector(&h).map(|d| d.dotc(&psi).norm_sqr());
            EigenSample {
                time: t,
                eigenvalues,
                dark_overlap,
                coupling_sum: h.get(0, 1).norm() + h.get(1, 2).norm(),
            }
        })
        .collect()
}
