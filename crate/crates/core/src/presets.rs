//! Parameter sets of the optical-cavity configuration.
//!
//! `W_L = 20 µm`, `W_C = 30 µm`, `v = 2 m/s`, `λ = 780 nm`,
//! `Ω0 = 50 v/W_L`, `G0 = 50 v/W_C`.

use crate::fields::FieldGeometry;

pub const LASER_WAIST: f64 = 20e-6;
pub const CAVITY_WAIST: f64 = 30e-6;
pub const SPEED: f64 = 2.0;
pub const WAVELENGTH: f64 = 780e-9;
/// Peak pulse area per transit, `Ω0 T_L = G0 T_C`.
pub const AREA_PER_TRANSIT: f64 = 50.0;

/// `(z0, d)` giving a half transfer (mixing angle ≈ π/4) for the first atom.
pub const HALF_STIRAP_POINT: (f64, f64) = (31.9e-6, 30.2e-6);

/// Common beam parameters with `z0 = d = 0`.
pub fn base_geometry() -> FieldGeometry {
    FieldGeometry {
        g0: AREA_PER_TRANSIT * SPEED / CAVITY_WAIST,
        omega0: AREA_PER_TRANSIT * SPEED / LASER_WAIST,
        cavity_waist: CAVITY_WAIST,
        laser_waist: LASER_WAIST,
        wavelength: WAVELENGTH,
        speed: SPEED,
        axis_offset: 0.0,
        laser_distance: 0.0,
        laser_phase: 0.0,
        arrival_delay: 0.0,
        cavity_separation: 0.0,
    }
}

/// First atom at the half-transfer point.
pub fn half_stirap_geometry() -> FieldGeometry {
    FieldGeometry {
        axis_offset: HALF_STIRAP_POINT.0,
        laser_distance: HALF_STIRAP_POINT.1,
        ..base_geometry()
    }
}

/// Second atom on the `z = 0` line through the same fields, arriving `delay`
/// seconds after the first.
pub fn second_atom_geometry(delay: f64) -> FieldGeometry {
    FieldGeometry {
        laser_distance: HALF_STIRAP_POINT.1,
        arrival_delay: delay,
        ..base_geometry()
    }
}

/// Cavity-then-laser passage through the cavity centre with the laser far
/// enough downstream that the cavity coupling vanishes first (complete
/// transfer to `|g2,1⟩`).
pub fn full_stirap_geometry() -> FieldGeometry {
    FieldGeometry { laser_distance: 50e-6, ..base_geometry() }
}

/// Smallest second-atom delay for which the two pulse supports do not
/// overlap, plus `margin` seconds.
pub fn disjoint_delay(first: &FieldGeometry, second: &FieldGeometry, margin: f64) -> f64 {
    use crate::fields::{pulses_atom1, pulses_atom2};
    let end = pulses_atom1(first).support.1;
    let start_at_zero = pulses_atom2(&FieldGeometry { arrival_delay: 0.0, ..*second }).support.0;
    end - start_at_zero + margin
}
