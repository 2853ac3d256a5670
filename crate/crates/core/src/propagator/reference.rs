use alloc::format;

use nalgebra::Vector3;

use crate::basis::StateVector;
use crate::error::{Error, Result};
use crate::hamiltonian::HermitianMatrix;

/// Upper bound on `max |H_ij| · dt` for the reference propagator.
pub const REFERENCE_MAX_PHASE_STEP: f64 = 1e-3;

/// Piecewise-constant propagation: the window is cut into equal steps no
/// longer than `dt`, and each step applies `exp(−i H(t_mid) Δt)` computed
/// from the eigendecomposition of the midpoint sample.
///
/// Every step must satisfy `max |H_ij| · Δt < 1e-3`.
pub fn reference_propagate<F>(hamiltonian: F, initial: &StateVector, window: (f64, f64), dt: f64) -> Result<StateVector>
where
    F: Fn(f64) -> HermitianMatrix,
{
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("reference step must be positive, got {dt}")));
    }
    let (n, mut psi) = initial.manifold_vector()?;
    let (t0, t1) = window;
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(format!("window ({t0}, {t1}) must be finite")));
    }
    let steps = libm::ceil(libm::fabs(t1 - t0) / dt) as usize;
    if steps == 0 {
        return Ok(initial.clone());
    }
    let h = (t1 - t0) / steps as f64;
    for k in 0..steps {
        let mid = t0 + (k as f64 + 0.5) * h;
        let sample = hamiltonian(mid);
        if !sample.is_finite() {
            return Err(Error::NonFiniteHamiltonian { t: mid });
        }
        let product = sample.max_abs_entry() * libm::fabs(h);
        if product >= REFERENCE_MAX_PHASE_STEP {
            return Err(Error::StepTooLarge { product });
        }
        let u = sample.evolution_operator(h);
        psi = u * psi;
    }
    Ok(StateVector::from_vector3(n, &Vector3::new(psi[0], psi[1], psi[2])))
}
