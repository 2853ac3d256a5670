//! CSV, JSON and SVG artifacts. Every file is written to a temporary file
//! in the target directory and renamed into place.
//!
//! Floats are printed with `{:e}`, the shortest representation that parses
//! back to the same `f64`.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fstirap_core::fields::{SequenceClass, Process, Ordering};
use fstirap_core::propagator::{AdiabaticityReport, EigenSample};
use fstirap_core::protocols::ProtocolResult;
use fstirap_core::scan::{CellStatus, OperatingPoint, ScanGrid};
use fstirap_core::{PulsePair, Trajectory, C64};
use serde::Serialize;

/// Writes `contents` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Tracks what a run has written, for the manifest.
#[derive(Debug, Default)]
pub struct Emitted {
    pub files: Vec<PathBuf>,
}

impl Emitted {
    pub fn text(&mut self, path: PathBuf, contents: &str) -> io::Result<()> {
        write_atomic(&path, contents.as_bytes())?;
        self.files.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, path: PathBuf, value: &T) -> io::Result<()> {
        write_json(&path, value)?;
        self.files.push(path);
        Ok(())
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Trajectory CSV columns:
/// `time_s, Omega_rad_s, G_rad_s, re_<tag>, im_<tag>` (per basis state),
/// `P_<tag>` (per basis state), `dark_overlap` (empty where undefined).
/// Tags are `g1_n`, `e_n`, `g2_{n+1}`.
pub fn trajectory_csv(trajectory: &Trajectory, pulses: &PulsePair, diagnostics: &[EigenSample]) -> String {
    let tags: Vec<String> = trajectory.basis().iter().map(|l| l.tag()).collect();
    let mut out = String::from("time_s,Omega_rad_s,G_rad_s");
    for t in &tags {
        let _ = write!(out, ",re_{t},im_{t}");
    }
    for t in &tags {
        let _ = write!(out, ",P_{t}");
    }
    out.push_str(",dark_overlap\n");
    for (k, &t) in trajectory.times.iter().enumerate() {
        let _ = write!(out, "{},{},{}", num(t), num(pulses.pump_at(t)), num(pulses.stokes_at(t)));
        for a in &trajectory.amplitudes[k] {
            let _ = write!(out, ",{},{}", num(a.re), num(a.im));
        }
        for p in &trajectory.populations[k] {
            let _ = write!(out, ",{}", num(*p));
        }
        let overlap = diagnostics.get(k).and_then(|d| d.dark_overlap).map(num).unwrap_or_default();
        let _ = writeln!(out, ",{overlap}");
    }
    out
}

/// Scan CSV: `z0_m, d_m, P_g10, P_g21, P_e0, concurrence, status`; failed
/// cells leave the numeric columns empty and carry `failed: <reason>`.
pub fn scan_csv(grid: &ScanGrid) -> String {
    let mut out = String::from("z0_m,d_m,P_g10,P_g21,P_e0,concurrence,status\n");
    for c in &grid.cells {
        let _ = write!(out, "{},{},", num(c.z0), num(c.d));
        match (&c.status, c.record) {
            (CellStatus::Ok, Some(r)) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},ok",
                    num(r.p_g10),
                    num(r.p_g21),
                    num(r.p_e0),
                    num(r.concurrence)
                );
            }
            (CellStatus::Failed(msg), _) => {
                let clean: String = msg.chars().map(|c| if c == ',' || c == '\n' { ';' } else { c }).collect();
                let _ = writeln!(out, ",,,,failed: {clean}");
            }
            (CellStatus::Ok, None) => {
                let _ = writeln!(out, ",,,,failed: missing record");
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct AmplitudeJson {
    pub label: String,
    pub re: f64,
    pub im: f64,
    pub population: f64,
}

#[derive(Serialize)]
pub struct SequenceJson {
    pub ordering: &'static str,
    pub process: &'static str,
    /// `None` (JSON null) when the ratio diverges.
    pub ending_ratio: Option<f64>,
    pub mixing_angle: Option<f64>,
    pub ratio_spread: Option<f64>,
    pub window_s: [f64; 2],
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl From<&SequenceClass> for SequenceJson {
    fn from(s: &SequenceClass) -> Self {
        Self {
            ordering: match s.ordering {
                Ordering::StokesFirst => "stokes_first",
                Ordering::PumpFirst => "pump_first",
            },
            process: match s.process {
                Process::Stirap => "STIRAP",
                Process::FractionalStirap => "f_STIRAP",
                Process::Incomplete => "incomplete",
            },
            ending_ratio: finite(s.ending_ratio),
            mixing_angle: finite(s.mixing_angle),
            ratio_spread: finite(s.ratio_spread),
            window_s: [s.window.0, s.window.1],
        }
    }
}

/// Stable JSON form of a protocol result.
#[derive(Serialize)]
pub struct ProtocolJson {
    pub protocol: &'static str,
    pub amplitudes: Vec<AmplitudeJson>,
    pub branches: Vec<AmplitudeJson>,
    pub concurrence: f64,
    pub residual_excitation: f64,
    pub excited_population: f64,
    pub peak_excited_population: f64,
    pub photon_population: Option<f64>,
    pub factorization_purity: Option<f64>,
    pub mixing_angle: Option<f64>,
    pub sequence: Option<SequenceJson>,
    pub alpha: Option<f64>,
    pub relative_phase: Option<f64>,
    pub expected_relative_phase: f64,
    pub target_fidelity: f64,
    pub lab_phase_factor: &'static str,
    pub warnings: Vec<String>,
}

impl From<&ProtocolResult> for ProtocolJson {
    fn from(r: &ProtocolResult) -> Self {
        let s = &r.final_state;
        Self {
            protocol: r.kind.name(),
            amplitudes: s
                .basis()
                .iter()
                .zip(s.amplitudes())
                .map(|(l, a)| AmplitudeJson { label: l.to_string(), re: a.re, im: a.im, population: a.norm_sqr() })
                .collect(),
            branches: r
                .branches
                .iter()
                .map(|b| AmplitudeJson {
                    label: b.label.to_string(),
                    re: b.amplitude.re,
                    im: b.amplitude.im,
                    population: b.amplitude.norm_sqr(),
                })
                .collect(),
            concurrence: r.concurrence,
            residual_excitation: r.residual_excitation,
            excited_population: r.excited_population,
            peak_excited_population: r.peak_excited_population,
            photon_population: r.photon_population,
            factorization_purity: r.factorization_purity,
            mixing_angle: finite(r.mixing_angle),
            sequence: r.sequence.as_ref().map(SequenceJson::from),
            alpha: r.optical_phase,
            relative_phase: r.relative_phase,
            expected_relative_phase: r.expected_relative_phase,
            target_fidelity: r.target_fidelity,
            lab_phase_factor: r.lab_phase_factor,
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct AdiabaticityJson {
    pub pump_area_product: f64,
    pub stokes_area_product: f64,
    pub interaction_product: f64,
    pub laser_transit_s: f64,
    pub cavity_transit_s: f64,
    pub interaction_time_s: f64,
    pub verdict: &'static str,
}

impl From<&AdiabaticityReport> for AdiabaticityJson {
    fn from(r: &AdiabaticityReport) -> Self {
        Self {
            pump_area_product: r.pump_area_product,
            stokes_area_product: r.stokes_area_product,
            interaction_product: r.interaction_product,
            laser_transit_s: r.laser_transit,
            cavity_transit_s: r.cavity_transit,
            interaction_time_s: r.interaction_time,
            verdict: r.verdict.name(),
        }
    }
}

#[derive(Serialize)]
pub struct OperatingPointJson {
    pub z0_m: f64,
    pub d_m: f64,
    pub p_g10: f64,
    pub p_e0: f64,
    pub score: f64,
}

impl From<&OperatingPoint> for OperatingPointJson {
    fn from(p: &OperatingPoint) -> Self {
        Self { z0_m: p.z0, d_m: p.d, p_g10: p.p_g10, p_e0: p.p_e0, score: p.score }
    }
}

/// Linear colour map (viridis anchor points, linear interpolation).
fn colour(x: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let x = x.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * f).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap of `P_g10` over `(z0, d)` in µm with white dots on `points`.
/// Failed cells are drawn grey.
pub fn scan_svg(grid: &ScanGrid, points: &[OperatingPoint]) -> String {
    let (w, h) = (520.0, 440.0);
    let (left, top, plot_w, plot_h) = (70.0, 30.0, 360.0, 340.0);
    let nz = grid.z0_values.len();
    let nd = grid.d_values.len();
    let um = |x: f64| x * 1e6;
    let (z_lo, z_hi) = (grid.z0_values[0], grid.z0_values[nz - 1]);
    let (d_lo, d_hi) = (grid.d_values[0], grid.d_values[nd - 1]);
    // Cells are centred on grid values.
    let dz = if nz > 1 { (z_hi - z_lo) / (nz - 1) as f64 } else { 1.0 };
    let dd = if nd > 1 { (d_hi - d_lo) / (nd - 1) as f64 } else { 1.0 };
    let x_of = |z: f64| left + (z - (z_lo - dz / 2.0)) / (z_hi - z_lo + dz) * plot_w;
    let y_of = |d: f64| top + plot_h - (d - (d_lo - dd / 2.0)) / (d_hi - d_lo + dd) * plot_h;
    let cw = plot_w / nz as f64;
    let ch = plot_h / nd as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for c in &grid.cells {
        let fill = match c.record {
            Some(r) => {
                let (r, g, b) = colour(r.p_g10);
                format!("#{r:02x}{g:02x}{b:02x}")
            }
            None => String::from("#808080"),
        };
        let x = x_of(c.z0) - cw / 2.0;
        let y = y_of(c.d) - ch / 2.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
            cw + 0.01,
            ch + 0.01
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let z = z_lo + f * (z_hi - z_lo);
        let d = d_lo + f * (d_hi - d_lo);
        let (x, y) = (x_of(z), y_of(d));
        let base = top + plot_h;
        let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{base}" x2="{x:.3}" y2="{:.3}" stroke="black"/>"#, base + 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{x:.3}" y="{:.3}" text-anchor="middle">{:.1}</text>"#,
            base + 18.0,
            um(z)
        );
        let _ = writeln!(s, r#"<line x1="{:.3}" y1="{y:.3}" x2="{left}" y2="{y:.3}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{:.1}</text>"#,
            left - 8.0,
            y + 4.0,
            um(d)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">z0 (µm)</text>"#,
        left + plot_w / 2.0,
        top + plot_h + 38.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.3}" text-anchor="middle" transform="rotate(-90 18 {:.3})">d (µm)</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="18" text-anchor="middle">final population P(g1,0)</text>"#,
        left + plot_w / 2.0
    );
    for p in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="white" stroke="black" stroke-width="0.8"/>"#,
            x_of(p.z0),
            y_of(p.d)
        );
    }
    // Colour bar.
    let bx = left + plot_w + 30.0;
    let steps = 50;
    for k in 0..steps {
        let v = k as f64 / (steps - 1) as f64;
        let (r, g, b) = colour(v);
        let y = top + plot_h - (k + 1) as f64 * plot_h / steps as f64;
        let _ = writeln!(
            s,
            r##"<rect x="{bx}" y="{y:.3}" width="18" height="{:.3}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
            plot_h / steps as f64 + 0.01
        );
    }
    let _ = writeln!(s, r#"<rect x="{bx}" y="{top}" width="18" height="{plot_h}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let y = top + plot_h - v * plot_h;
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{v:.2}</text>"#, bx + 24.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}
