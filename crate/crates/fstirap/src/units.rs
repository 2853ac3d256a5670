//! Unit-suffixed quantities at the configuration boundary.
//!
//! Everything is converted to SI (metres, seconds, rad/s, radians) on
//! parsing. Frequencies without a suffix, or with a `rad/s` family suffix,
//! are angular; `Hz`-family suffixes are cyclic and multiplied by 2π.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Speed,
    /// Angular frequency (Rabi frequencies, couplings).
    Frequency,
    Angle,
    Dimensionless,
}

impl Dimension {
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Speed => "m/s",
            Dimension::Frequency => "rad/s",
            Dimension::Angle => "rad",
            Dimension::Dimensionless => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("cannot parse number in {0:?}")]
    Number(String),
    #[error("unknown unit {unit:?} for a {expected} quantity (SI unit {si:?})")]
    Unit { unit: String, expected: &'static str, si: &'static str },
    #[error("{0:?} refers to v and a waist, which are not available here")]
    Context(String),
}

/// Speed and waists used by the `k v/W_L`, `k v/W_C` shorthand.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct TransitContext {
    pub speed: Option<f64>,
    pub laser_waist: Option<f64>,
    pub cavity_waist: Option<f64>,
}

fn scale(dim: Dimension, unit: &str) -> Option<f64> {
    let u = unit.trim();
    let s = match dim {
        Dimension::Length => match u {
            "" | "m" => 1.0,
            "mm" => 1e-3,
            "um" | "µm" | "μm" => 1e-6,
            "nm" => 1e-9,
            _ => return None,
        },
        Dimension::Time => match u {
            "" | "s" => 1.0,
            "ms" => 1e-3,
            "us" | "µs" | "μs" => 1e-6,
            "ns" => 1e-9,
            _ => return None,
        },
        Dimension::Speed => match u {
            "" | "m/s" => 1.0,
            "mm/s" => 1e-3,
            "um/s" | "µm/s" | "μm/s" => 1e-6,
            _ => return None,
        },
        Dimension::Frequency => match u {
            "" | "rad/s" => 1.0,
            "krad/s" => 1e3,
            "Mrad/s" => 1e6,
            "Grad/s" => 1e9,
            "Hz" => TAU,
            "kHz" => TAU * 1e3,
            "MHz" => TAU * 1e6,
            "GHz" => TAU * 1e9,
            _ => return None,
        },
        Dimension::Angle => match u {
            "" | "rad" => 1.0,
            "deg" => PI / 180.0,
            "pi" => PI,
            _ => return None,
        },
        Dimension::Dimensionless => match u {
            "" => 1.0,
            _ => return None,
        },
    };
    Some(s)
}

fn dimension_name(dim: Dimension) -> &'static str {
    match dim {
        Dimension::Length => "length",
        Dimension::Time => "time",
        Dimension::Speed => "speed",
        Dimension::Frequency => "frequency",
        Dimension::Angle => "angle",
        Dimension::Dimensionless => "dimensionless",
    }
}

/// Splits `"12.5 um"` / `"12.5um"` into the number and the unit text.
fn split_number(text: &str) -> (&str, &str) {
    let t = text.trim();
    let mut end = 0;
    let bytes = t.as_bytes();
    while end < bytes.len() {
        let c = bytes[end] as char;
        let exponent_sign = (c == '+' || c == '-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
        let exponent = (c == 'e' || c == 'E')
            && end > 0
            && bytes.get(end + 1).is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+');
        if c.is_ascii_digit() || c == '.' || (end == 0 && (c == '-' || c == '+')) || exponent || exponent_sign {
            end += 1;
        } else {
            break;
        }
    }
    (&t[..end], t[end..].trim())
}

/// Parses a quantity given as text, e.g. `"31.9 um"`, `"0.15 MHz"`,
/// `"50 v/W_L"`.
pub fn parse_quantity(text: &str, dim: Dimension, ctx: &TransitContext) -> Result<f64, UnitError> {
    let (number, unit) = split_number(text);
    let value: f64 = if number.is_empty() && dim == Dimension::Angle && unit == "pi" {
        1.0
    } else {
        number.parse().map_err(|_| UnitError::Number(text.to_string()))?
    };
    if dim == Dimension::Frequency {
        let compact: String = unit.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let waist = match compact.as_str() {
            "v/W_L" => Some(ctx.laser_waist),
            "v/W_C" => Some(ctx.cavity_waist),
            _ => None,
        };
        if let Some(waist) = waist {
            return match (ctx.speed, waist) {
                (Some(v), Some(w)) => Ok(value * v / w),
                _ => Err(UnitError::Context(text.to_string())),
            };
        }
    }
    let s = scale(dim, unit).ok_or_else(|| UnitError::Unit {
        unit: unit.to_string(),
        expected: dimension_name(dim),
        si: dim.si_unit(),
    })?;
    Ok(match decimal_exponent(s) {
        Some(exp) => shift_decimal(value, exp),
        None => value * s,
    })
}

/// `Some(k)` when `s` is exactly the double nearest to `10^k`.
fn decimal_exponent(s: f64) -> Option<i32> {
    (-12..=12).find(|&k| format!("1e{k}").parse::<f64>() == Ok(s))
}

/// `value · 10^exp`, correctly rounded: `"20 um"` gives the same double as
/// the literal `20e-6`.
fn shift_decimal(value: f64, exp: i32) -> f64 {
    let repr = format!("{value:e}");
    let (mantissa, e) = repr.split_once('e').expect("LowerExp always has an exponent");
    let e: i32 = e.parse().expect("LowerExp exponent is an integer");
    format!("{mantissa}e{}", e + exp).parse().expect("valid float literal")
}
