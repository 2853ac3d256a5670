//! Configuration, artifact output and run orchestration for the `fstirap`
//! command-line tool. The numerics live in `fstirap-core`.

pub mod app;
pub mod config;
pub mod output;
pub mod units;

pub use app::{parallel_scan, run, AppError, Outcome};
pub use config::{Overrides, RawConfig, RunConfig};
