//! JSON run configuration: raw schema, unit resolution and the canonical
//! SI form written back into the run manifest.

use std::collections::BTreeSet;
use std::fmt;

use fstirap_core::fields::ClassifyOptions;
use fstirap_core::presets;
use fstirap_core::propagator::{AdiabaticityThresholds, StepControl, DEFAULT_SAMPLES};
use fstirap_core::protocols::ProtocolKind;
use fstirap_core::FieldGeometry;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{parse_quantity, Dimension, TransitContext, UnitError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(String),
    #[error("missing required field `{0}`")]
    Missing(String),
    #[error("field `{field}`: {source}")]
    Unit { field: String, source: UnitError },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.into() }
}

/// A number in SI units, or text with a unit suffix.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Scan,
    Protocol,
    Classify,
    Adiabaticity,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Simulate => "simulate",
            Mode::Scan => "scan",
            Mode::Protocol => "protocol",
            Mode::Classify => "classify",
            Mode::Adiabaticity => "adiabaticity",
        };
        f.write_str(s)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolChoice {
    AtomPhoton,
    AtomAtom,
    PhotonPhoton,
}

impl ProtocolChoice {
    pub fn kind(self) -> ProtocolKind {
        match self {
            ProtocolChoice::AtomPhoton => ProtocolKind::AtomPhoton,
            ProtocolChoice::AtomAtom => ProtocolKind::AtomAtom,
            ProtocolChoice::PhotonPhoton => ProtocolKind::PhotonPhoton,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Which pulse pair `simulate` propagates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseChoice {
    /// Cavity, then laser (first atom, Eqs. for `G(t)`, `Ω(t)` with `z0`).
    Atom1,
    /// Laser, then cavity on the `z = 0` line (second atom).
    Atom2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialLevel {
    #[serde(rename = "g1,0")]
    G1,
    #[serde(rename = "e,0")]
    E,
    #[serde(rename = "g2,1")]
    G2,
}

impl InitialLevel {
    pub fn index(self) -> usize {
        match self {
            InitialLevel::G1 => 0,
            InitialLevel::E => 1,
            InitialLevel::G2 => 2,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGeometry {
    #[serde(rename = "G0")]
    pub g0: Option<Quantity>,
    #[serde(rename = "Omega0")]
    pub omega0: Option<Quantity>,
    #[serde(rename = "W_C")]
    pub cavity_waist: Option<Quantity>,
    #[serde(rename = "W_L")]
    pub laser_waist: Option<Quantity>,
    pub lambda: Option<Quantity>,
    pub v: Option<Quantity>,
    pub z0: Option<Quantity>,
    pub d: Option<Quantity>,
    #[serde(rename = "phi_L")]
    pub phi_l: Option<Quantity>,
    /// Seconds, or `"auto"` for the smallest delay with disjoint supports.
    pub tau: Option<Quantity>,
    pub x0: Option<Quantity>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSimulate {
    pub pulses: Option<PulseChoice>,
    pub initial: Option<InitialLevel>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawIntegrator {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<Quantity>,
    pub max_steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawClassify {
    pub epsilon_rel: Option<f64>,
    pub stability: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScan {
    pub z0_range: Option<[Quantity; 2]>,
    pub d_range: Option<[Quantity; 2]>,
    pub resolution: Option<[usize; 2]>,
    pub target: Option<f64>,
    pub tol_p: Option<f64>,
    pub tol_e: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAdiabaticity {
    pub t_int: Option<Quantity>,
    pub adiabatic: Option<f64>,
    pub marginal: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub dir: Option<String>,
    pub samples: Option<usize>,
    pub formats: Option<Vec<Format>>,
    pub workers: Option<usize>,
}

/// The document as written by the user (or a previous run manifest).
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub mode: Option<Mode>,
    pub protocol: Option<ProtocolChoice>,
    pub geometry: Option<RawGeometry>,
    pub geometry2: Option<RawGeometry>,
    pub simulate: Option<RawSimulate>,
    pub integrator: Option<RawIntegrator>,
    pub classify: Option<RawClassify>,
    pub scan: Option<RawScan>,
    pub adiabaticity: Option<RawAdiabaticity>,
    pub output: Option<RawOutput>,
    /// Metadata block of a run manifest; ignored on input.
    pub run: Option<serde_json::Value>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateSettings {
    pub pulses: PulseChoice,
    pub initial: InitialLevel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSettings {
    pub z0_range: (f64, f64),
    pub d_range: (f64, f64),
    pub resolution: (usize, usize),
    pub target: f64,
    pub tol_p: f64,
    pub tol_e: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticitySettings {
    pub t_int: Option<f64>,
    pub thresholds: AdiabaticityThresholds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSettings {
    pub dir: String,
    pub samples: usize,
    pub formats: BTreeSet<Format>,
    pub workers: usize,
}

impl OutputSettings {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Fully resolved configuration, SI units throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub protocol: Option<ProtocolChoice>,
    pub geometry: FieldGeometry,
    pub geometry2: Option<FieldGeometry>,
    pub simulate: SimulateSettings,
    pub control: StepControl,
    pub classify: ClassifyOptions,
    pub scan: ScanSettings,
    pub adiabaticity: AdiabaticitySettings,
    pub output: OutputSettings,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub protocol: Option<ProtocolChoice>,
    pub out: Option<String>,
    pub workers: Option<usize>,
    pub samples: Option<usize>,
    pub formats: Vec<Format>,
}

fn quantity(q: &Quantity, field: &str, dim: Dimension, ctx: &TransitContext) -> Result<f64, ConfigError> {
    let value = match q {
        Quantity::Number(x) => *x,
        Quantity::Text(t) => {
            parse_quantity(t, dim, ctx).map_err(|source| ConfigError::Unit { field: field.to_string(), source })?
        }
    };
    if !value.is_finite() {
        return Err(invalid(field, "must be finite"));
    }
    Ok(value)
}

fn opt_quantity(
    q: &Option<Quantity>,
    field: &str,
    dim: Dimension,
    ctx: &TransitContext,
) -> Result<Option<f64>, ConfigError> {
    q.as_ref().map(|q| quantity(q, field, dim, ctx)).transpose()
}

fn positive(value: f64, field: &str) -> Result<f64, ConfigError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(field, format!("must be positive, got {value}")))
    }
}

/// Resolves a geometry block. With `parent`, unspecified fields are
/// inherited from it; otherwise `G0`, `Omega0`, `W_C`, `W_L`, `lambda` and
/// `v` are required and the rest default to zero.
fn resolve_geometry(
    raw: &RawGeometry,
    block: &str,
    parent: Option<&FieldGeometry>,
) -> Result<(FieldGeometry, bool), ConfigError> {
    let f = |name: &str| format!("{block}.{name}");
    let none = TransitContext::default();
    let inherit = |value: Option<f64>, name: &str, pick: fn(&FieldGeometry) -> f64| -> Result<f64, ConfigError> {
        match (value, parent) {
            (Some(v), _) => Ok(v),
            (None, Some(p)) => Ok(pick(p)),
            (None, None) => Err(ConfigError::Missing(f(name))),
        }
    };
    let cavity_waist = inherit(
        opt_quantity(&raw.cavity_waist, &f("W_C"), Dimension::Length, &none)?,
        "W_C",
        |g| g.cavity_waist,
    )?;
    let laser_waist = inherit(
        opt_quantity(&raw.laser_waist, &f("W_L"), Dimension::Length, &none)?,
        "W_L",
        |g| g.laser_waist,
    )?;
    let speed = inherit(opt_quantity(&raw.v, &f("v"), Dimension::Speed, &none)?, "v", |g| g.speed)?;
    let wavelength =
        inherit(opt_quantity(&raw.lambda, &f("lambda"), Dimension::Length, &none)?, "lambda", |g| g.wavelength)?;
    let ctx = TransitContext { speed: Some(speed), laser_waist: Some(laser_waist), cavity_waist: Some(cavity_waist) };
    let g0 = inherit(opt_quantity(&raw.g0, &f("G0"), Dimension::Frequency, &ctx)?, "G0", |g| g.g0)?;
    let omega0 = inherit(opt_quantity(&raw.omega0, &f("Omega0"), Dimension::Frequency, &ctx)?, "Omega0", |g| g.omega0)?;

    let zero_default = |q: &Option<Quantity>, name: &str, dim, pick: fn(&FieldGeometry) -> f64| {
        Ok::<f64, ConfigError>(match opt_quantity(q, &f(name), dim, &none)? {
            Some(v) => v,
            None => parent.map_or(0.0, pick),
        })
    };
    // A second atom or cavity starts on the axis unless told otherwise.
    let axis_offset = opt_quantity(&raw.z0, &f("z0"), Dimension::Length, &none)?.unwrap_or(0.0);
    let laser_distance = zero_default(&raw.d, "d", Dimension::Length, |g| g.laser_distance)?;
    let laser_phase = zero_default(&raw.phi_l, "phi_L", Dimension::Angle, |g| g.laser_phase)?;
    let cavity_separation = zero_default(&raw.x0, "x0", Dimension::Length, |g| g.cavity_separation)?;
    let (arrival_delay, auto_delay) = match &raw.tau {
        Some(Quantity::Text(t)) if t.trim() == "auto" => (0.0, true),
        Some(q) => (quantity(q, &f("tau"), Dimension::Time, &none)?, false),
        None => (0.0, parent.is_some()),
    };

    let geom = FieldGeometry {
        g0,
        omega0,
        cavity_waist: positive(cavity_waist, &f("W_C"))?,
        laser_waist: positive(laser_waist, &f("W_L"))?,
        wavelength: positive(wavelength, &f("lambda"))?,
        speed: positive(speed, &f("v"))?,
        axis_offset,
        laser_distance,
        laser_phase,
        arrival_delay,
        cavity_separation,
    };
    geom.validate().map_err(|e| invalid(block, e.to_string()))?;
    Ok((geom, auto_delay))
}

impl RunConfig {
    pub fn resolve(raw: &RawConfig, overrides: &Overrides) -> Result<Self, ConfigError> {
        let mode = match (overrides.mode, raw.mode) {
            (Some(cli), Some(file)) if cli != file => {
                return Err(invalid("mode", format!("config says `{file}` but the command is `{cli}`")));
            }
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => return Err(ConfigError::Missing(String::from("mode"))),
        };
        let protocol = match (overrides.protocol, raw.protocol) {
            (Some(cli), Some(file)) if cli != file => {
                return Err(invalid("protocol", "differs between the config and the command line"));
            }
            (Some(p), _) | (None, Some(p)) => Some(p),
            (None, None) if mode == Mode::Protocol => return Err(ConfigError::Missing(String::from("protocol"))),
            (None, None) => None,
        };

        let raw_geom = raw.geometry.as_ref().ok_or_else(|| ConfigError::Missing(String::from("geometry")))?;
        let (geometry, _) = resolve_geometry(raw_geom, "geometry", None)?;
        let needs_second = matches!(protocol, Some(ProtocolChoice::AtomAtom | ProtocolChoice::PhotonPhoton))
            && mode == Mode::Protocol;
        let geometry2 = match (&raw.geometry2, needs_second) {
            (Some(raw2), _) => Some(resolve_geometry(raw2, "geometry2", Some(&geometry))?),
            (None, true) => Some(resolve_geometry(&RawGeometry::default(), "geometry2", Some(&geometry))?),
            (None, false) => None,
        }
        .map(|(mut g2, auto)| {
            if auto && protocol == Some(ProtocolChoice::AtomAtom) {
                // Disjoint supports plus one longest transit time of slack.
                let slack = g2.laser_transit().max(g2.cavity_transit());
                g2.arrival_delay = presets::disjoint_delay(&geometry, &g2, slack);
            }
            g2
        });

        let sim = raw.simulate.clone().unwrap_or_default();
        let simulate = SimulateSettings {
            pulses: sim.pulses.unwrap_or(PulseChoice::Atom1),
            initial: sim.initial.unwrap_or(InitialLevel::G1),
        };

        let none = TransitContext::default();
        let integ = raw.integrator.clone().unwrap_or_default();
        let defaults = StepControl::default();
        let control = StepControl {
            rel_tol: integ.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: integ.abs_tol.unwrap_or(defaults.abs_tol),
            max_step: opt_quantity(&integ.max_step, "integrator.max_step", Dimension::Time, &none)?,
            max_steps: integ.max_steps.unwrap_or(defaults.max_steps),
        };
        control.validate().map_err(|e| invalid("integrator", e.to_string()))?;

        let cls = raw.classify.clone().unwrap_or_default();
        let cdef = ClassifyOptions::default();
        let classify = ClassifyOptions {
            epsilon_rel: cls.epsilon_rel.unwrap_or(cdef.epsilon_rel),
            stability: cls.stability.unwrap_or(cdef.stability),
            samples: cls.samples.unwrap_or(cdef.samples),
        };
        if !(classify.epsilon_rel > 0.0 && classify.epsilon_rel < 1.0) {
            return Err(invalid("classify.epsilon_rel", "must lie in (0, 1)"));
        }

        let sc = raw.scan.clone().unwrap_or_default();
        let range = |r: &Option<[Quantity; 2]>, name: &str| -> Result<(f64, f64), ConfigError> {
            match r {
                Some([a, b]) => {
                    let field = format!("scan.{name}");
                    let lo = quantity(a, &field, Dimension::Length, &none)?;
                    let hi = quantity(b, &field, Dimension::Length, &none)?;
                    if lo > hi {
                        return Err(invalid(&field, "lower bound exceeds upper bound"));
                    }
                    Ok((lo, hi))
                }
                None => Ok((0.0, 60e-6)),
            }
        };
        let [nz, nd] = sc.resolution.unwrap_or([101, 101]);
        if nz < 2 || nd < 2 {
            return Err(invalid("scan.resolution", "each axis needs at least 2 points"));
        }
        let scan = ScanSettings {
            z0_range: range(&sc.z0_range, "z0_range")?,
            d_range: range(&sc.d_range, "d_range")?,
            resolution: (nz, nd),
            target: sc.target.unwrap_or(0.5),
            tol_p: sc.tol_p.unwrap_or(0.01),
            tol_e: sc.tol_e.unwrap_or(0.01),
        };

        let ad = raw.adiabaticity.clone().unwrap_or_default();
        let tdef = AdiabaticityThresholds::default();
        let adiabaticity = AdiabaticitySettings {
            t_int: opt_quantity(&ad.t_int, "adiabaticity.t_int", Dimension::Time, &none)?,
            thresholds: AdiabaticityThresholds {
                adiabatic: ad.adiabatic.unwrap_or(tdef.adiabatic),
                marginal: ad.marginal.unwrap_or(tdef.marginal),
            },
        };

        let out = raw.output.clone().unwrap_or_default();
        let formats: BTreeSet<Format> = if !overrides.formats.is_empty() {
            overrides.formats.iter().copied().collect()
        } else if let Some(f) = out.formats {
            f.into_iter().collect()
        } else {
            [Format::Csv, Format::Json, Format::Svg].into_iter().collect()
        };
        let samples = overrides.samples.or(out.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(invalid("output.samples", "at least 2 samples are needed"));
        }
        let workers = overrides.workers.or(out.workers).unwrap_or(1);
        if workers == 0 {
            return Err(invalid("output.workers", "must be at least 1"));
        }
        let output = OutputSettings {
            dir: overrides.out.clone().or(out.dir).unwrap_or_else(|| String::from("out")),
            samples,
            formats,
            workers,
        };

        Ok(RunConfig {
            mode,
            protocol,
            geometry,
            geometry2,
            simulate,
            control,
            classify,
            scan,
            adiabaticity,
            output,
        })
    }

    /// Canonical SI form; feeding it back through [`RawConfig::from_json`]
    /// and [`RunConfig::resolve`] gives the same configuration.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let geom = |g: &FieldGeometry| {
            json!({
                "G0": g.g0,
                "Omega0": g.omega0,
                "W_C": g.cavity_waist,
                "W_L": g.laser_waist,
                "lambda": g.wavelength,
                "v": g.speed,
                "z0": g.axis_offset,
                "d": g.laser_distance,
                "phi_L": g.laser_phase,
                "tau": g.arrival_delay,
                "x0": g.cavity_separation,
            })
        };
        let mut doc = json!({
            "mode": self.mode,
            "geometry": geom(&self.geometry),
            "simulate": self.simulate,
            "integrator": {
                "rel_tol": self.control.rel_tol,
                "abs_tol": self.control.abs_tol,
                "max_step": self.control.max_step,
                "max_steps": self.control.max_steps,
            },
            "classify": {
                "epsilon_rel": self.classify.epsilon_rel,
                "stability": self.classify.stability,
                "samples": self.classify.samples,
            },
            "scan": {
                "z0_range": [self.scan.z0_range.0, self.scan.z0_range.1],
                "d_range": [self.scan.d_range.0, self.scan.d_range.1],
                "resolution": [self.scan.resolution.0, self.scan.resolution.1],
                "target": self.scan.target,
                "tol_p": self.scan.tol_p,
                "tol_e": self.scan.tol_e,
            },
            "adiabaticity": {
                "t_int": self.adiabaticity.t_int,
                "adiabatic": self.adiabaticity.thresholds.adiabatic,
                "marginal": self.adiabaticity.thresholds.marginal,
            },
            "output": {
                "dir": self.output.dir,
                "samples": self.output.samples,
                "formats": self.output.formats,
                "workers": self.output.workers,
            },
        });
        let obj = doc.as_object_mut().expect("object literal");
        if let Some(p) = self.protocol {
            obj.insert(String::from("protocol"), json!(p));
        }
        if let Some(g2) = &self.geometry2 {
            obj.insert(String::from("geometry2"), geom(g2));
        }
        // Null-valued optional fields read back as absent.
        for block in ["integrator", "adiabaticity"] {
            if let Some(b) = obj.get_mut(block).and_then(|b| b.as_object_mut()) {
                b.retain(|_, v| !v.is_null());
            }
        }
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4: &str = r#"{
        "mode": "simulate",
        "geometry": {
            "G0": "50 v/W_C", "Omega0": "50 v/W_L",
            "W_C": "30 um", "W_L": "20 um", "lambda": "780 nm", "v": "2 m/s",
            "z0": "31.9 um", "d": "30.2 um"
        }
    }"#;

    #[test]
    fn resolves_units() {
        let cfg = RunConfig::resolve(&RawConfig::from_json(FIG4).unwrap(), &Overrides::default()).unwrap();
        assert_eq!(cfg.geometry, presets::half_stirap_geometry());
        assert_eq!(cfg.output.samples, DEFAULT_SAMPLES);
        assert_eq!(cfg.control, StepControl::default());
    }

    #[test]
    fn missing_field_is_named() {
        let text = FIG4.replace(r#""W_C": "30 um", "#, "");
        let err = RunConfig::resolve(&RawConfig::from_json(&text).unwrap(), &Overrides::default()).unwrap_err();
        assert!(matches!(&err, ConfigError::Missing(f) if f == "geometry.W_C"), "{err}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = FIG4.replace(r#""mode""#, r#""colour": 1, "mode""#);
        let err = RawConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("colour") && err.contains("line"), "{err}");
    }

    #[test]
    fn mode_conflict() {
        let raw = RawConfig::from_json(FIG4).unwrap();
        let o = Overrides { mode: Some(Mode::Scan), ..Default::default() };
        assert!(RunConfig::resolve(&raw, &o).is_err());
    }

    #[test]
    fn canonical_form_round_trips() {
        let text = FIG4.replace(r#""mode": "simulate""#, r#""mode": "protocol", "protocol": "atom-atom""#);
        let cfg = RunConfig::resolve(&RawConfig::from_json(&text).unwrap(), &Overrides::default()).unwrap();
        let g2 = cfg.geometry2.unwrap();
        assert_eq!(g2.axis_offset, 0.0);
        assert!(g2.arrival_delay > 0.0);
        let again = serde_json::to_string(&cfg.to_json()).unwrap();
        let back = RunConfig::resolve(&RawConfig::from_json(&again).unwrap(), &Overrides::default()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            out: Some(String::from("elsewhere")),
            workers: Some(4),
            samples: Some(10),
            formats: vec![Format::Csv],
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&RawConfig::from_json(FIG4).unwrap(), &o).unwrap();
        assert_eq!(cfg.output.dir, "elsewhere");
        assert_eq!(cfg.output.workers, 4);
        assert_eq!(cfg.output.samples, 10);
        assert!(cfg.output.wants(Format::Csv) && !cfg.output.wants(Format::Json));
    }
}
