//! Fractional stimulated Raman adiabatic passage (f-STIRAP) for three-level
//! Λ atoms crossing a cavity mode and a laser beam.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`basis`]: atom ⊗ Fock basis labels and pure state vectors.
//! * [`hamiltonian`]: effective (rotating-frame) and projected (lab-frame)
//!   Hamiltonians of one `{|g1,n⟩, |e,n⟩, |g2,n+1⟩}` manifold, the frame
//!   map between them, the dark state and the mixing angle.
//! * [`fields`]: Hermite–Gauss couplings and trajectory-induced pulse pairs,
//!   plus classification of a pulse sequence (STIRAP / f-STIRAP).
//! * [`propagator`]: adaptive Dormand–Prince integration of the Schrödinger
//!   equation, a piecewise exact-exponential reference propagator, and
//!   adiabaticity diagnostics.
//! * [`protocols`]: atom–photon, atom–atom and photon–photon entanglement
//!   preparation built from sequential single-atom passages.
//! * [`scan`]: `(z0, d)` grid scans and operating-point search.
//!
//! Units are SI with ħ = 1: lengths in metres, times in seconds, Rabi
//! frequencies in rad/s.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod basis;
pub mod entanglement;
pub mod error;
pub mod fields;
pub mod hamiltonian;
pub mod presets;
pub mod propagator;
pub mod protocols;
pub mod scan;

pub use num_complex::Complex64 as C64;

pub use basis::{AtomLevel, BasisLabel, StateVector};
pub use error::{Error, Result};
pub use fields::{FieldGeometry, GaussianPulse, PulsePair};
pub use hamiltonian::HermitianMatrix;
pub use propagator::{StepControl, Trajectory};
pub use protocols::{ProtocolKind, ProtocolOptions, ProtocolResult};
pub use scan::{ScanGrid, ScanPlan};
