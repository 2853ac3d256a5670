//! Field geometry, trajectory-induced pulses and pulse-sequence
//! classification.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use core::fmt;

use crate::error::{Error, Result};
use crate::hamiltonian::{effective_unchecked, mixing_angle, HermitianMatrix};

/// Support half-margin in units of the longest transit time.
pub const SUPPORT_MARGIN: f64 = 6.0;

/// Beam and trajectory parameters for one passage through a cavity mode and
/// a laser beam. SI units; Rabi frequencies in rad/s.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FieldGeometry {
    /// Peak cavity coupling `G0`.
    pub g0: f64,
    /// Peak laser Rabi frequency `Ω0`.
    pub omega0: f64,
    /// Cavity mode waist `W_C`.
    pub cavity_waist: f64,
    /// Laser waist `W_L`.
    pub laser_waist: f64,
    pub wavelength: f64,
    /// Atom speed along the flight axis.
    pub speed: f64,
    /// Offset `z0` of the trajectory from the cavity centre along the cavity axis.
    pub axis_offset: f64,
    /// Distance `d` from the cavity centre to the laser axis.
    pub laser_distance: f64,
    /// Initial laser phase `φ_L`.
    pub laser_phase: f64,
    /// Arrival delay `τ` at the cavity centre (0 for the first atom).
    pub arrival_delay: f64,
    /// Separation `x0` between two cavities along the flight axis.
    pub cavity_separation: f64,
}

impl FieldGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("W_C", self.cavity_waist),
            ("W_L", self.laser_waist),
            ("lambda", self.wavelength),
            ("v", self.speed),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} must be positive and finite, got {value}")));
            }
        }
        for (name, value) in [("G0", self.g0), ("Omega0", self.omega0)] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} must be non-negative and finite, got {value}")));
            }
        }
        let finite = [
            ("z0", self.axis_offset),
            ("d", self.laser_distance),
            ("phi_L", self.laser_phase),
            ("tau", self.arrival_delay),
            ("x0", self.cavity_separation),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} must be finite, got {value}")));
            }
        }
        Ok(())
    }

    /// Laser transit time `T_L = W_L / v`.
    pub fn laser_transit(&self) -> f64 {
        self.laser_waist / self.speed
    }

    /// Cavity transit time `T_C = W_C / v`.
    pub fn cavity_transit(&self) -> f64 {
        self.cavity_waist / self.speed
    }

    /// Standing-wave factor `cos(2π z0 / λ)`.
    pub fn standing_wave_factor(&self) -> f64 {
        libm::cos(TAU * self.axis_offset / self.wavelength)
    }
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coupling of a Hermite–Gauss TEM_mn cavity mode at `(x, y, z)`:
/// `G0 H_m(√2 x/W_C) H_n(√2 y/W_C) e^{−(x²+y²)/W_C²} cos(2π z/λ)`.
pub fn hermite_gauss_coupling(x: f64, y: f64, z: f64, m: u32, n: u32, geom: &FieldGeometry) -> f64 {
    let w = geom.cavity_waist;
    geom.g0
        * hermite(m, SQRT_2 * x / w)
        * hermite(n, SQRT_2 * y / w)
        * libm::exp(-(x * x + y * y) / (w * w))
        * libm::cos(TAU * z / geom.wavelength)
}

/// `peak · exp(−((t − center)/width)²)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GaussianPulse {
    pub peak: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianPulse {
    pub fn new(peak: f64, center: f64, width: f64) -> Self {
        Self { peak, center, width }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        self.peak * libm::exp(-u * u)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PulseKind {
    Pump,
    Stokes,
}

impl fmt::Display for PulseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseKind::Pump => "pump",
            PulseKind::Stokes => "Stokes",
        })
    }
}

/// Pump `Ω(t)` and Stokes `G(t)` envelopes with their phases.
///
/// Envelopes are non-negative; a negative standing-wave factor is carried as
/// `stokes_phase = π`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PulsePair {
    pub pump: GaussianPulse,
    pub stokes: GaussianPulse,
    pub pump_phase: f64,
    pub stokes_phase: f64,
    pub support: (f64, f64),
}

impl PulsePair {
    /// Builds the pair with the default support
    /// `[min_peak − 6·max_width, max_peak + 6·max_width]`.
    pub fn new(pump: GaussianPulse, stokes: GaussianPulse, pump_phase: f64, stokes_phase: f64) -> Self {
        let width = pump.width.max(stokes.width);
        let lo = pump.center.min(stokes.center) - SUPPORT_MARGIN * width;
        let hi = pump.center.max(stokes.center) + SUPPORT_MARGIN * width;
        Self { pump, stokes, pump_phase, stokes_phase, support: (lo, hi) }
    }

    #[inline]
    pub fn pump_at(&self, t: f64) -> f64 {
        self.pump.value(t)
    }

    #[inline]
    pub fn stokes_at(&self, t: f64) -> f64 {
        self.stokes.value(t)
    }

    /// Effective rotating-frame Hamiltonian at time `t`.
    #[inline]
    pub fn hamiltonian_at(&self, t: f64) -> HermitianMatrix {
        effective_unchecked(self.pump_at(t), self.stokes_at(t), self.pump_phase, self.stokes_phase)
    }

    /// Same pair with the pump phase shifted by `delta`.
    pub fn with_extra_pump_phase(mut self, delta: f64) -> Self {
        self.pump_phase += delta;
        self
    }

    /// Interval where both envelopes exceed `fraction` of the larger peak,
    /// or `None` if they never do simultaneously.
    pub fn overlap_window(&self, fraction: f64) -> Option<(f64, f64)> {
        let level = fraction * self.pump.peak.max(self.stokes.peak);
        let half_width = |p: &GaussianPulse| -> Option<(f64, f64)> {
            if p.peak <= level || level <= 0.0 {
                return None;
            }
            let r = p.width * libm::sqrt(libm::log(p.peak / level));
            Some((p.center - r, p.center + r))
        };
        let (a0, a1) = half_width(&self.pump)?;
        let (b0, b1) = half_width(&self.stokes)?;
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        (lo < hi).then_some((lo, hi))
    }
}

/// Pulses seen by the first atom (cavity, then laser when `d > 0`):
/// `G(t) = G0 e^{−(vt)²/W_C²} cos(2π z0/λ)`,
/// `Ω(t) = Ω0 e^{−z0²/W_L²} e^{−(vt−d)²/W_L²}`.
pub fn pulses_atom1(geom: &FieldGeometry) -> PulsePair {
    let cos = geom.standing_wave_factor();
    let stokes_phase = if cos < 0.0 { PI } else { 0.0 };
    let z0 = geom.axis_offset;
    let wl = geom.laser_waist;
    let stokes = GaussianPulse::new(geom.g0 * libm::fabs(cos), 0.0, geom.cavity_transit());
    let pump = GaussianPulse::new(
        geom.omega0 * libm::exp(-z0 * z0 / (wl * wl)),
        geom.laser_distance / geom.speed,
        geom.laser_transit(),
    );
    PulsePair::new(pump, stokes, geom.laser_phase, stokes_phase)
}

/// Pulses seen by the second atom on the `z = 0` line (laser, then cavity):
/// `G(t) = G0 e^{−[v(t−τ)]²/W_C²}`, `Ω(t) = Ω0 e^{−[v(t−τ)+d]²/W_L²}`.
pub fn pulses_atom2(geom: &FieldGeometry) -> PulsePair {
    let tau = geom.arrival_delay;
    let stokes = GaussianPulse::new(geom.g0, tau, geom.cavity_transit());
    let pump = GaussianPulse::new(geom.omega0, tau - geom.laser_distance / geom.speed, geom.laser_transit());
    PulsePair::new(pump, stokes, geom.laser_phase, 0.0)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// Stokes (cavity) peaks first: counterintuitive order for `g1 → g2`.
    StokesFirst,
    PumpFirst,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Process {
    /// The later pulse dominates the tail: complete transfer.
    Stirap,
    /// Both pulses end in a stable finite ratio.
    FractionalStirap,
    Incomplete,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Lower edge of the tail band, relative to the global peak.
    pub epsilon_rel: f64,
    /// Maximum relative standard deviation of `Ω/G` over the tail band for
    /// a finite ratio to count as stable.
    pub stability: f64,
    pub samples: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { epsilon_rel: 1e-2, stability: 0.1, samples: 4001 }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SequenceClass {
    pub ordering: Ordering,
    /// Mean `Ω/G` over the tail band; may be infinite.
    pub ending_ratio: f64,
    pub mixing_angle: f64,
    pub process: Process,
    /// Relative standard deviation of `Ω/G` over the tail band.
    pub ratio_spread: f64,
    /// Tail band `(t_start, t_end)` the ratio was measured on.
    pub window: (f64, f64),
}

/// Classifies a pulse sequence by how the two envelopes end.
///
/// The ratio `Ω/G` is measured on the tail band: times after the later of
/// the two peaks where `max(Ω, G)` lies between `ε` and `√ε` of the global
/// peak, i.e. where the pulses are still non-negligible but both decaying.
pub fn classify_sequence(pulses: &PulsePair, options: &ClassifyOptions) -> Result<SequenceClass> {
    let eps = options.epsilon_rel;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon_rel must lie in (0, 1), got {eps}")));
    }
    if options.samples < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 samples, got {}", options.samples)));
    }
    if !(pulses.pump.peak > 0.0) {
        return Err(Error::ZeroPulse(PulseKind::Pump));
    }
    if !(pulses.stokes.peak > 0.0) {
        return Err(Error::ZeroPulse(PulseKind::Stokes));
    }

    let ordering = if pulses.stokes.center <= pulses.pump.center {
        Ordering::StokesFirst
    } else {
        Ordering::PumpFirst
    };
    let later_peak = pulses.stokes.center.max(pulses.pump.center);
    let (t0, t1) = pulses.support;
    let dt = (t1 - t0) / (options.samples - 1) as f64;
    let times = (0..options.samples).map(|k| t0 + dt * k as f64);

    let peak = pulses.pump.peak.max(pulses.stokes.peak);
    let upper = libm::sqrt(eps) * peak;
    let lower = eps * peak;

    let mut band: Vec<(f64, f64, f64)> = times
        .clone()
        .filter(|&t| t >= later_peak)
        .map(|t| (t, pulses.pump_at(t), pulses.stokes_at(t)))
        .filter(|&(_, o, g)| {
            let m = o.max(g);
            m > lower && m <= upper
        })
        .collect();
    if band.is_empty() {
        band = times
            .filter(|&t| t >= later_peak)
            .map(|t| (t, pulses.pump_at(t), pulses.stokes_at(t)))
            .filter(|&(_, o, g)| o.max(g) > lower)
            .collect();
    }
    let (Some(&first), Some(&last)) = (band.first(), band.last()) else {
        return Ok(SequenceClass {
            ordering,
            ending_ratio: f64::NAN,
            mixing_angle: f64::NAN,
            process: Process::Incomplete,
            ratio_spread: f64::NAN,
            window: (later_peak, later_peak),
        });
    };

    let ratios: Vec<f64> = band.iter().map(|&(_, o, g)| o / g).collect();
    let count = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / count;
    let spread = if mean.is_finite() && mean > 0.0 {
        let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / count;
        libm::sqrt(var) / mean
    } else {
        f64::INFINITY
    };

    let (_, o_end, g_end) = last;
    let (earlier_end, later_end) = match ordering {
        Ordering::StokesFirst => (g_end, o_end),
        Ordering::PumpFirst => (o_end, g_end),
    };
    let process = if earlier_end < eps * later_end {
        Process::Stirap
    } else if spread < options.stability {
        Process::FractionalStirap
    } else {
        Process::Incomplete
    };
    let angle = if mean.is_infinite() { FRAC_PI_2 } else { mixing_angle(mean, 1.0)? };

    Ok(SequenceClass {
        ordering,
        ending_ratio: mean,
        mixing_angle: angle,
        process,
        ratio_spread: spread,
        window: (first.0, last.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use core::f64::consts::FRAC_PI_4;
    use proptest::prelude::*;

    fn white_dot_beams() -> FieldGeometry {
        presets::half_stirap_geometry()
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(0, 0.3), 1.0);
        assert_eq!(hermite(1, 0.3), 0.6);
        assert!((hermite(2, 0.3) - (4.0 * 0.09 - 2.0)).abs() < 1e-15);
        assert!((hermite(3, 0.3) - (8.0 * 0.027 - 12.0 * 0.3)).abs() < 1e-15);
    }

    #[test]
    fn hermite_gauss_examples() {
        let g = white_dot_beams();
        assert_eq!(hermite_gauss_coupling(0.0, 0.0, 0.0, 0, 0, &g), g.g0);
        let at_waist = hermite_gauss_coupling(g.cavity_waist, 0.0, 0.0, 0, 0, &g);
        assert!((at_waist - g.g0 * libm::exp(-1.0)).abs() < 1e-9 * g.g0);
        let node = hermite_gauss_coupling(0.0, 0.0, g.wavelength / 4.0, 0, 0, &g);
        assert!(node.abs() < 1e-15 * g.g0);
        assert_eq!(hermite_gauss_coupling(0.0, 7e-6, 0.0, 1, 0, &g), 0.0);
    }

    #[test]
    fn atom1_node_has_no_stokes() {
        let mut g = white_dot_beams();
        g.axis_offset = g.wavelength / 4.0;
        let p = pulses_atom1(&g);
        assert!(p.stokes.peak < 1e-15 * g.g0);
    }

    #[test]
    fn atom1_at_origin() {
        let mut g = white_dot_beams();
        g.axis_offset = 0.0;
        let p = pulses_atom1(&g);
        assert_eq!(p.stokes_at(0.0), g.g0);
        let d = g.laser_distance;
        let wl = g.laser_waist;
        assert!((p.pump_at(0.0) - g.omega0 * libm::exp(-d * d / (wl * wl))).abs() < 1e-9);
        assert!(p.stokes.center < p.pump.center);
    }

    #[test]
    fn atom1_samples_at_origin() {
        // Closed forms evaluated in extended precision (mpmath, 30 digits):
        // G(0) = G0 cos(2π z0/λ), Ω(0) = Ω0 exp(−(z0² + d²)/W_L²).
        let p = pulses_atom1(&white_dot_beams());
        let g_ref = 2_664_809.211_345_004;
        let o_ref = 40_167.900_892_966_47;
        assert!((p.stokes_at(0.0) - g_ref).abs() < 1e-8 * g_ref, "{}", p.stokes_at(0.0));
        assert!((p.pump_at(0.0) - o_ref).abs() < 1e-8 * o_ref, "{}", p.pump_at(0.0));
        assert_eq!(p.stokes_phase, 0.0);
    }

    #[test]
    fn atom2_timing() {
        let mut g = white_dot_beams();
        g.arrival_delay = 0.0;
        let p = pulses_atom2(&g);
        assert_eq!(p.stokes_at(0.0), g.g0);
        let d = g.laser_distance;
        let wl = g.laser_waist;
        assert!((p.pump_at(0.0) - g.omega0 * libm::exp(-d * d / (wl * wl))).abs() < 1e-9);

        g.arrival_delay = 4e-4;
        let p = pulses_atom2(&g);
        assert_eq!(p.stokes.center, 4e-4);
        assert!((p.pump.center - (4e-4 - d / g.speed)).abs() < 1e-18);
        assert!(p.pump.center < p.stokes.center);
    }

    #[test]
    fn atom2_samples_on_axis() {
        // mpmath reference values of the closed forms at t = τ and t = τ − d/v.
        let mut g = white_dot_beams();
        g.arrival_delay = 3e-4;
        let p = pulses_atom2(&g);
        let o_at_cavity = 511_369.894_031_349_5;
        assert!((p.pump_at(3e-4) - o_at_cavity).abs() < 1e-8 * o_at_cavity, "{}", p.pump_at(3e-4));
        let t = 3e-4 - g.laser_distance / g.speed;
        let g_at_laser = 1_209_969.347_385_069;
        assert!((p.stokes_at(t) - g_at_laser).abs() < 1e-8 * g_at_laser, "{}", p.stokes_at(t));
    }

    #[test]
    fn negative_standing_wave_folds_into_phase() {
        let mut g = white_dot_beams();
        g.axis_offset = g.wavelength / 2.0;
        let p = pulses_atom1(&g);
        assert_eq!(p.stokes_phase, PI);
        assert!((p.stokes.peak - g.g0).abs() < 1e-9 * g.g0);
    }

    #[test]
    fn support_covers_tails() {
        let g = white_dot_beams();
        let p = pulses_atom1(&g);
        let t_max = g.cavity_transit().max(g.laser_transit());
        assert!((p.support.0 - (0.0 - 6.0 * t_max)).abs() < 1e-15);
        assert!((p.support.1 - (g.laser_distance / g.speed + 6.0 * t_max)).abs() < 1e-15);
        for t in [p.support.0, p.support.1] {
            assert!(p.pump_at(t) <= 1e-6 * p.pump.peak);
            assert!(p.stokes_at(t) <= 1e-6 * p.stokes.peak);
        }
    }

    #[test]
    fn scaled_copy_is_fractional() {
        let stokes = GaussianPulse::new(2.0e6, 0.0, 1e-5);
        let pump = GaussianPulse::new(1.5e6, 0.0, 1e-5);
        let p = PulsePair::new(pump, stokes, 0.0, 0.0);
        let c = classify_sequence(&p, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.process, Process::FractionalStirap);
        assert!((c.ending_ratio - 0.75).abs() < 1e-12);
        assert!((c.mixing_angle - libm::atan(0.75)).abs() < 1e-12);
    }

    #[test]
    fn atom2_sequence_is_pump_first_stirap() {
        let mut g = white_dot_beams();
        g.arrival_delay = 4e-4;
        let c = classify_sequence(&pulses_atom2(&g), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.ordering, Ordering::PumpFirst);
        assert_eq!(c.process, Process::Stirap);
        assert!(c.ending_ratio < 1e-3);
        assert!(c.mixing_angle < 1e-3);
    }

    #[test]
    fn white_dot_is_half_fractional() {
        let c = classify_sequence(&pulses_atom1(&white_dot_beams()), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.ordering, Ordering::StokesFirst);
        assert_eq!(c.process, Process::FractionalStirap);
        assert!((c.mixing_angle - FRAC_PI_4).abs() < 0.1, "{}", c.mixing_angle);
    }

    #[test]
    fn distant_laser_is_full_stirap() {
        let g = presets::full_stirap_geometry();
        let c = classify_sequence(&pulses_atom1(&g), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.ordering, Ordering::StokesFirst);
        assert_eq!(c.process, Process::Stirap);
        assert!(c.mixing_angle > 1.5);
    }

    #[test]
    fn zero_pulse_is_error() {
        let mut g = white_dot_beams();
        g.omega0 = 0.0;
        assert_eq!(
            classify_sequence(&pulses_atom1(&g), &ClassifyOptions::default()),
            Err(Error::ZeroPulse(PulseKind::Pump))
        );
        let bad = ClassifyOptions { epsilon_rel: 1.5, ..Default::default() };
        assert!(classify_sequence(&pulses_atom1(&white_dot_beams()), &bad).is_err());
    }

    #[test]
    fn overlap_window_inside_support() {
        let p = pulses_atom1(&white_dot_beams());
        let (lo, hi) = p.overlap_window(0.05).unwrap();
        assert!(p.support.0 < lo && lo < hi && hi < p.support.1);
        let level = 0.05 * p.stokes.peak.max(p.pump.peak);
        assert!(p.pump_at(lo).min(p.stokes_at(lo)) >= level * (1.0 - 1e-9));
        assert!(p.pump_at(hi).min(p.stokes_at(hi)) >= level * (1.0 - 1e-9));
    }

    #[test]
    fn validation() {
        let mut g = white_dot_beams();
        assert!(g.validate().is_ok());
        g.speed = 0.0;
        assert!(matches!(g.validate(), Err(Error::InvalidGeometry(_))));
        let mut g = white_dot_beams();
        g.omega0 = -1.0;
        assert!(g.validate().is_err());
    }

    proptest! {
        #[test]
        fn peak_ordering(d in 1e-6..80e-6f64, tau in 0.0..1e-3f64) {
            let mut g = white_dot_beams();
            g.laser_distance = d;
            g.arrival_delay = tau;
            let p1 = pulses_atom1(&g);
            prop_assert!(p1.stokes.center < p1.pump.center);
            let p2 = pulses_atom2(&g);
            prop_assert!(p2.pump.center < p2.stokes.center);
        }

        #[test]
        fn speed_scaling_compresses_time(k in 0.2..5.0f64, t in -50e-6..80e-6f64) {
            let g = white_dot_beams();
            let mut fast = g;
            fast.speed *= k;
            let (a, b) = (pulses_atom1(&g), pulses_atom1(&fast));
            let tol = 1e-12 * g.g0.max(g.omega0);
            prop_assert!((b.stokes_at(t / k) - a.stokes_at(t)).abs() <= tol);
            prop_assert!((b.pump_at(t / k) - a.pump_at(t)).abs() <= tol);
        }

        #[test]
        fn envelopes_finite_nonnegative(z0 in 0.0..60e-6f64, d in 0.0..60e-6f64, t in -1e-4..2e-4f64) {
            let mut g = white_dot_beams();
            g.axis_offset = z0;
            g.laser_distance = d;
            let p = pulses_atom1(&g);
            let (o, s) = (p.pump_at(t), p.stokes_at(t));
            prop_assert!(o.is_finite() && o >= 0.0);
            prop_assert!(s.is_finite() && s >= 0.0);
        }
    }
}
