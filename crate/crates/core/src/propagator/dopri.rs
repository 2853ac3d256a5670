//! Dormand–Prince 5(4) stepper for `i dψ/dt = H(t) ψ` on one manifold.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::hamiltonian::HermitianMatrix;
use crate::C64;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) type State = Vector3<C64>;

/// Right-hand side `−i H(t) ψ`, rejecting non-finite samples.
pub(crate) fn derivative<F>(hamiltonian: &F, t: f64, y: &State) -> Result<State>
where
    F: Fn(f64) -> HermitianMatrix,
{
    let h = hamiltonian(t);
    if !h.is_finite() {
        return Err(Error::NonFiniteHamiltonian { t });
    }
    Ok(h.apply(y) * C64::new(0.0, -1.0))
}

pub(crate) struct Step {
    pub y: State,
    /// Derivative at the end point (first stage of the next step).
    pub k7: State,
    /// Scaled RMS error estimate; the step is acceptable when ≤ 1.
    pub error: f64,
}

/// One trial step of size `h` from `(t, y)` with `k1 = f(t, y)`.
pub(crate) fn step<F>(hamiltonian: &F, t: f64, y: &State, k1: &State, h: f64, rel_tol: f64, abs_tol: f64) -> Result<Step>
where
    F: Fn(f64) -> HermitianMatrix,
{
    let hc = |a: f64| C64::new(a * h, 0.0);
    let k2 = derivative(hamiltonian, t + C2 * h, &(y + k1 * hc(A21)))?;
    let k3 = derivative(hamiltonian, t + C3 * h, &(y + k1 * hc(A31) + k2 * hc(A32)))?;
    let k4 = derivative(hamiltonian, t + C4 * h, &(y + k1 * hc(A41) + k2 * hc(A42) + k3 * hc(A43)))?;
    let k5 = derivative(
        hamiltonian,
        t + C5 * h,
        &(y + k1 * hc(A51) + k2 * hc(A52) + k3 * hc(A53) + k4 * hc(A54)),
    )?;
    let k6 = derivative(
        hamiltonian,
        t + h,
        &(y + k1 * hc(A61) + k2 * hc(A62) + k3 * hc(A63) + k4 * hc(A64) + k5 * hc(A65)),
    )?;
    let y_new = y + k1 * hc(A71) + k3 * hc(A73) + k4 * hc(A74) + k5 * hc(A75) + k6 * hc(A76);
    let k7 = derivative(hamiltonian, t + h, &y_new)?;
    let err = k1 * hc(E1) + k3 * hc(E3) + k4 * hc(E4) + k5 * hc(E5) + k6 * hc(E6) + k7 * hc(E7);

    let mut sum = 0.0;
    for i in 0..3 {
        let scale = abs_tol + rel_tol * y[i].norm().max(y_new[i].norm());
        let r = err[i].norm() / scale;
        sum += r * r;
    }
    Ok(Step { y: y_new, k7, error: libm::sqrt(sum / 3.0) })
}
