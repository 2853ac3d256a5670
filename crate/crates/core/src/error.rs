use alloc::string::String;

use thiserror::Error;

use crate::fields::PulseKind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// The dark-state direction is undefined when both couplings vanish.
    #[error("dark state is undefined when both couplings vanish")]
    DegenerateDarkState,

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("non-finite Hamiltonian sample at t = {t:e} s")]
    NonFiniteHamiltonian { t: f64 },

    #[error("norm drift {drift:e} exceeds tolerance {tolerance:e} at t = {t:e} s")]
    NormDrift { drift: f64, tolerance: f64, t: f64 },

    #[error("integration failed at t = {t:e} s: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("reference step too large: max coupling * dt = {product:e} (must be < 1e-3)")]
    StepTooLarge { product: f64 },

    #[error("{0} pulse is identically zero")]
    ZeroPulse(PulseKind),

    #[error(
        "pulse supports overlap: first interaction ends at {first_end:e} s, \
         second starts at {second_start:e} s"
    )]
    OverlappingSupports { first_end: f64, second_start: f64 },

    #[error("inconsistent partition: {0}")]
    Partition(String),
}
