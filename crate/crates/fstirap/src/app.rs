//! Mode dispatch: resolve a config, run it, write artifacts and the run
//! manifest.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fstirap_core::fields::{classify_sequence, pulses_atom1, pulses_atom2};
use fstirap_core::propagator::{adiabaticity_check_with, instantaneous_eigen_diagnostics, propagate_sampled};
use fstirap_core::protocols::{atom_atom_protocol, atom_photon_protocol, photon_photon_protocol, ProtocolOptions};
use fstirap_core::scan::{locate_operating_points, ScanGrid, ScanPlan};
use fstirap_core::{PulsePair, StateVector, C64};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::config::{ConfigError, Format, Mode, Overrides, ProtocolChoice, PulseChoice, RawConfig, RunConfig};
use crate::output::{
    scan_csv, scan_svg, trajectory_csv, write_json, AdiabaticityJson, Emitted, OperatingPointJson, ProtocolJson,
    SequenceJson,
};

pub const MANIFEST_NAME: &str = "run_manifest.json";

#[derive(Debug, Error)]
pub enum AppError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: io::Error },
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] fstirap_core::Error),
    #[error("{failed} of {total} scan cells failed (see the status column)")]
    ScanFailures { failed: usize, total: usize },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("cannot start worker pool: {0}")]
    Workers(String),
}

impl AppError {
    /// 2 for configuration problems, 1 for numerical or output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::ReadConfig { .. } | AppError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub config: RunConfig,
    pub files: Vec<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

/// Parses and resolves a config file.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig, AppError> {
    let text = std::fs::read_to_string(path).map_err(|source| AppError::ReadConfig { path: path.into(), source })?;
    let raw = RawConfig::from_json(&text)?;
    Ok(RunConfig::resolve(&raw, overrides)?)
}

/// Loads, runs and records one configuration. The manifest is written even
/// when the run fails after the configuration was accepted.
pub fn run(path: &Path, overrides: &Overrides) -> Result<Outcome, AppError> {
    let start = Instant::now();
    let config = load_config(path, overrides)?;
    let dir = PathBuf::from(&config.output.dir);
    let mut emitted = Emitted::default();
    let mut summary = String::new();
    let result = execute(&config, &dir, &mut emitted, &mut summary);

    let mut manifest = config.to_json();
    let outputs: Vec<String> = emitted
        .files
        .iter()
        .map(|p| p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned()))
        .collect();
    manifest.as_object_mut().expect("config is an object").insert(
        String::from("run"),
        json!({
            "tool": "fstirap",
            "version": env!("CARGO_PKG_VERSION"),
            "config_source": path.display().to_string(),
            "wall_time_s": start.elapsed().as_secs_f64(),
            "outputs": outputs,
            "status": match &result {
                Ok(()) => String::from("ok"),
                Err(e) => format!("failed: {e}"),
            },
        }),
    );
    let manifest_path = dir.join(MANIFEST_NAME);
    write_json(&manifest_path, &manifest)?;
    result?;
    emitted.files.push(manifest_path);
    Ok(Outcome { config, files: emitted.files, summary })
}

fn options(config: &RunConfig, samples: usize) -> ProtocolOptions {
    ProtocolOptions { control: config.control, samples, classify: config.classify, ..Default::default() }
}

fn selected_pulses(config: &RunConfig) -> PulsePair {
    match config.simulate.pulses {
        PulseChoice::Atom1 => pulses_atom1(&config.geometry),
        PulseChoice::Atom2 => pulses_atom2(&config.geometry),
    }
}

fn execute(config: &RunConfig, dir: &Path, out: &mut Emitted, summary: &mut String) -> Result<(), AppError> {
    let o = &config.output;
    match config.mode {
        Mode::Simulate => {
            let pulses = selected_pulses(config);
            let mut init = [C64::new(0.0, 0.0); 3];
            init[config.simulate.initial.index()] = C64::new(1.0, 0.0);
            let h = |t: f64| pulses.hamiltonian_at(t);
            let trajectory = propagate_sampled(
                h,
                &StateVector::in_manifold(0, init),
                pulses.support,
                &config.control,
                o.samples,
            )?;
            let diagnostics = instantaneous_eigen_diagnostics(h, &trajectory);
            let [p1, pe, p2] = trajectory.final_populations();
            let _ = writeln!(summary, "final populations: P(g1,0) = {p1:.6}, P(e,0) = {pe:.6}, P(g2,1) = {p2:.6}");
            let _ = writeln!(summary, "norm drift: {:e}", trajectory.norm_drift);
            if o.wants(Format::Csv) {
                out.text(dir.join("trajectory.csv"), &trajectory_csv(&trajectory, &pulses, &diagnostics))?;
            }
            if o.wants(Format::Json) {
                let window = pulses.overlap_window(0.05);
                let min_overlap = window.and_then(|(lo, hi)| {
                    diagnostics
                        .iter()
                        .filter(|d| d.time >= lo && d.time <= hi)
                        .filter_map(|d| d.dark_overlap)
                        .reduce(f64::min)
                });
                let sequence = classify_sequence(&pulses, &config.classify).ok();
                out.json(
                    dir.join("simulate.json"),
                    &json!({
                        "final_populations": {"g1,0": p1, "e,0": pe, "g2,1": p2},
                        "peak_excited_population": trajectory.peak_population(1),
                        "norm_drift": trajectory.norm_drift,
                        "steps_accepted": trajectory.steps_accepted,
                        "steps_rejected": trajectory.steps_rejected,
                        "support_s": [pulses.support.0, pulses.support.1],
                        "overlap_window_s": window.map(|(a, b)| [a, b]),
                        "min_dark_overlap_in_window": min_overlap,
                        "sequence": sequence.as_ref().map(SequenceJson::from),
                    }),
                )?;
            }
        }
        Mode::Protocol => {
            let choice = config.protocol.expect("resolved protocol mode has a protocol");
            let opts = options(config, o.samples);
            let g1 = &config.geometry;
            let second = || config.geometry2.as_ref().expect("resolved two-stage protocol has geometry2");
            let result = match choice {
                ProtocolChoice::AtomPhoton => atom_photon_protocol(g1, &opts)?,
                ProtocolChoice::AtomAtom => atom_atom_protocol(g1, second(), &opts)?,
                ProtocolChoice::PhotonPhoton => photon_photon_protocol(g1, second(), &opts)?,
            };
            let _ = writeln!(summary, "protocol: {}", result.kind.name());
            let _ = writeln!(summary, "concurrence: {:.6}", result.concurrence);
            let _ = writeln!(summary, "residual excitation: {:.3e}", result.residual_excitation);
            if let Some(p) = result.factorization_purity {
                let _ = writeln!(summary, "factorization purity: {p:.6}");
            }
            for w in &result.warnings {
                let _ = writeln!(summary, "warning: {w}");
            }
            if o.wants(Format::Json) {
                out.json(dir.join("protocol.json"), &ProtocolJson::from(&result))?;
            }
            if o.wants(Format::Csv) {
                let mut stage_pulses = vec![pulses_atom1(g1)];
                match choice {
                    ProtocolChoice::AtomPhoton => {}
                    ProtocolChoice::AtomAtom => stage_pulses.push(pulses_atom2(second())),
                    ProtocolChoice::PhotonPhoton => {
                        let alpha = result.optical_phase.unwrap_or(0.0);
                        let mut p = pulses_atom1(second());
                        p.pump_phase = g1.laser_phase + alpha;
                        stage_pulses.push(p);
                    }
                }
                for (k, (traj, pulses)) in result.stages.iter().zip(&stage_pulses).enumerate() {
                    let diag = instantaneous_eigen_diagnostics(|t| pulses.hamiltonian_at(t), traj);
                    out.text(dir.join(format!("stage{}.csv", k + 1)), &trajectory_csv(traj, pulses, &diag))?;
                }
            }
        }
        Mode::Scan => {
            let s = &config.scan;
            // Cells only need final states.
            let plan = ScanPlan::new(config.geometry, s.z0_range, s.d_range, s.resolution, options(config, 2))?;
            let grid = parallel_scan(&plan, o.workers)?;
            let points = locate_operating_points(&grid, s.target, s.tol_p, s.tol_e);
            let _ = writeln!(summary, "cells: {}, failed: {}", grid.cells.len(), grid.failures());
            let _ = writeln!(summary, "operating points: {}", points.len());
            if let Some(best) = points.first() {
                let _ = writeln!(
                    summary,
                    "best: z0 = {:.3} um, d = {:.3} um, P(g1,0) = {:.4}, P(e,0) = {:.2e}",
                    best.z0 * 1e6,
                    best.d * 1e6,
                    best.p_g10,
                    best.p_e0
                );
            }
            if o.wants(Format::Csv) {
                out.text(dir.join("scan.csv"), &scan_csv(&grid))?;
            }
            if o.wants(Format::Svg) {
                out.text(dir.join("scan.svg"), &scan_svg(&grid, &points))?;
            }
            if o.wants(Format::Json) {
                let pts: Vec<OperatingPointJson> = points.iter().map(OperatingPointJson::from).collect();
                out.json(
                    dir.join("operating_points.json"),
                    &json!({
                        "target": s.target,
                        "tol_p": s.tol_p,
                        "tol_e": s.tol_e,
                        "failed_cells": grid.failures(),
                        "points": pts,
                    }),
                )?;
            }
            if grid.failures() > 0 {
                return Err(AppError::ScanFailures { failed: grid.failures(), total: grid.cells.len() });
            }
        }
        Mode::Classify => {
            let pulses = selected_pulses(config);
            let class = classify_sequence(&pulses, &config.classify)?;
            let j = SequenceJson::from(&class);
            let _ = writeln!(summary, "ordering: {}, process: {}", j.ordering, j.process);
            if let Some(a) = j.mixing_angle {
                let _ = writeln!(summary, "mixing angle: {a:.4} rad");
            }
            if o.wants(Format::Json) {
                out.json(dir.join("classify.json"), &j)?;
            }
        }
        Mode::Adiabaticity => {
            let a = &config.adiabaticity;
            let report = adiabaticity_check_with(&config.geometry, a.t_int, &a.thresholds);
            let j = AdiabaticityJson::from(&report);
            let _ = writeln!(summary, "Omega0*T_L = {}", j.pump_area_product);
            let _ = writeln!(summary, "G0*T_C = {}", j.stokes_area_product);
            let _ = writeln!(summary, "G0*T_int = {}", j.interaction_product);
            let _ = writeln!(summary, "verdict: {}", j.verdict);
            if o.wants(Format::Json) {
                out.json(dir.join("adiabaticity.json"), &j)?;
            }
        }
    }
    Ok(())
}

/// Evaluates every cell on `workers` threads; cells are assembled in index
/// order, so the grid equals [`ScanPlan::run`] exactly.
pub fn parallel_scan(plan: &ScanPlan, workers: usize) -> Result<ScanGrid, AppError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| AppError::Workers(e.to_string()))?;
    let cells = pool.install(|| (0..plan.len()).into_par_iter().map(|i| plan.run_cell(i)).collect());
    Ok(plan.assemble(cells)?)
}
