//! `(z0, d)` grid scans of the atom–photon passage and operating-point
//! search.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::FieldGeometry;
use crate::protocols::{atom_photon_protocol, ProtocolOptions};

/// `n` evenly spaced values from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Final populations and concurrence of one successful cell.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CellRecord {
    pub p_g10: f64,
    pub p_g21: f64,
    pub p_e0: f64,
    pub concurrence: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanCell {
    pub z0: f64,
    pub d: f64,
    pub status: CellStatus,
    pub record: Option<CellRecord>,
}

/// Grid definition; cells are indexed row-major with `z0` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPlan {
    pub base: FieldGeometry,
    pub z0_values: Vec<f64>,
    pub d_values: Vec<f64>,
    pub options: ProtocolOptions,
}

impl ScanPlan {
    pub fn new(
        base: FieldGeometry,
        z0_range: (f64, f64),
        d_range: (f64, f64),
        resolution: (usize, usize),
        options: ProtocolOptions,
    ) -> Result<Self> {
        for (name, (lo, hi), n) in [("z0", z0_range, resolution.0), ("d", d_range, resolution.1)] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidArgument(format!("{name} range ({lo}, {hi}) must be finite and ascending")));
            }
            if n < 2 {
                return Err(Error::InvalidArgument(format!("{name} resolution must be at least 2, got {n}")));
            }
        }
        Ok(Self {
            base,
            z0_values: linspace(z0_range.0, z0_range.1, resolution.0),
            d_values: linspace(d_range.0, d_range.1, resolution.1),
            options,
        })
    }

    pub fn len(&self) -> usize {
        self.z0_values.len() * self.d_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(z0, d)` of cell `index`.
    pub fn coordinates(&self, index: usize) -> (f64, f64) {
        let nd = self.d_values.len();
        (self.z0_values[index / nd], self.d_values[index % nd])
    }

    /// Runs one cell; failures are recorded in the cell, never returned.
    pub fn run_cell(&self, index: usize) -> ScanCell {
        let (z0, d) = self.coordinates(index);
        let geom = FieldGeometry { axis_offset: z0, laser_distance: d, ..self.base };
        match atom_photon_protocol(&geom, &self.options) {
            Ok(r) => {
                let p = r.populations();
                ScanCell {
                    z0,
                    d,
                    status: CellStatus::Ok,
                    record: Some(CellRecord { p_g10: p[0], p_e0: p[1], p_g21: p[2], concurrence: r.concurrence }),
                }
            }
            Err(e) => ScanCell { z0, d, status: CellStatus::Failed(e.to_string()), record: None },
        }
    }

    /// Builds the grid from cells given in index order.
    pub fn assemble(&self, cells: Vec<ScanCell>) -> Result<ScanGrid> {
        if cells.len() != self.len() {
            return Err(Error::InvalidArgument(format!("expected {} cells, got {}", self.len(), cells.len())));
        }
        Ok(ScanGrid { z0_values: self.z0_values.clone(), d_values: self.d_values.clone(), cells })
    }

    /// Serial evaluation of every cell.
    pub fn run(&self) -> ScanGrid {
        let cells = (0..self.len()).map(|i| self.run_cell(i)).collect();
        ScanGrid { z0_values: self.z0_values.clone(), d_values: self.d_values.clone(), cells }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanGrid {
    pub z0_values: Vec<f64>,
    pub d_values: Vec<f64>,
    /// Row-major, `z0` outer.
    pub cells: Vec<ScanCell>,
}

impl ScanGrid {
    pub fn cell(&self, i_z0: usize, i_d: usize) -> &ScanCell {
        &self.cells[i_z0 * self.d_values.len() + i_d]
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.status != CellStatus::Ok).count()
    }
}

/// Serial scan of the atom–photon passage over a `(z0, d)` grid.
pub fn scan(
    base: &FieldGeometry,
    z0_range: (f64, f64),
    d_range: (f64, f64),
    resolution: (usize, usize),
    options: &ProtocolOptions,
) -> Result<ScanGrid> {
    Ok(ScanPlan::new(*base, z0_range, d_range, resolution, *options)?.run())
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OperatingPoint {
    pub z0: f64,
    pub d: f64,
    pub p_g10: f64,
    pub p_e0: f64,
    /// `|P_g10 − target| + P_e0`
    pub score: f64,
}

/// Cells with `|P_g10 − target| < tol_p` and `P_e0 < tol_e`, best score
/// first (ties keep grid order).
pub fn locate_operating_points(grid: &ScanGrid, target: f64, tol_p: f64, tol_e: f64) -> Vec<OperatingPoint> {
    let mut points: Vec<OperatingPoint> = grid
        .cells
        .iter()
        .filter_map(|c| {
            let r = c.record?;
            let miss = libm::fabs(r.p_g10 - target);
            (miss < tol_p && r.p_e0 < tol_e).then_some(OperatingPoint {
                z0: c.z0,
                d: c.d,
                p_g10: r.p_g10,
                p_e0: r.p_e0,
                score: miss + r.p_e0,
            })
        })
        .collect();
    points.sort_by(|a, b| a.score.total_cmp(&b.score));
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn quick() -> ProtocolOptions {
        ProtocolOptions { samples: 2, ..Default::default() }
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 60e-6, 101);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 60e-6);
        assert_eq!(v[50], 30e-6);
        assert_eq!(linspace(1.0, 2.0, 1), alloc::vec![1.0]);
    }

    #[test]
    fn plan_validation() {
        let b = presets::base_geometry();
        assert!(ScanPlan::new(b, (0.0, 1.0), (0.0, 1.0), (1, 3), quick()).is_err());
        assert!(ScanPlan::new(b, (1.0, 0.0), (0.0, 1.0), (2, 3), quick()).is_err());
        assert!(ScanPlan::new(b, (0.0, f64::NAN), (0.0, 1.0), (2, 3), quick()).is_err());
    }

    #[test]
    fn row_major_order() {
        let plan = ScanPlan::new(presets::base_geometry(), (0.0, 1e-6), (0.0, 2e-6), (2, 3), quick()).unwrap();
        assert_eq!(plan.coordinates(0), (0.0, 0.0));
        assert_eq!(plan.coordinates(2), (0.0, 2e-6));
        assert_eq!(plan.coordinates(3), (1e-6, 0.0));
    }

    #[test]
    fn failed_cells_are_recorded() {
        let base = FieldGeometry { speed: -1.0, ..presets::base_geometry() };
        let grid = scan(&base, (0.0, 1e-6), (0.0, 1e-6), (2, 2), &quick()).unwrap();
        assert_eq!(grid.failures(), 4);
        assert!(locate_operating_points(&grid, 0.5, 0.1, 0.1).is_empty());
    }

    #[test]
    fn white_dot_cell() {
        let (z0, d) = presets::HALF_STIRAP_POINT;
        let grid = scan(&presets::base_geometry(), (z0, z0), (d, d), (2, 2), &quick()).unwrap();
        let r = grid.cell(0, 0).record.unwrap();
        assert!((r.p_g10 - 0.5).abs() < 0.05);
        assert!(r.p_e0 < 0.01);
        assert!((r.p_g10 + r.p_g21 + r.p_e0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sorting_is_stable_by_score() {
        let cell = |z0: f64, p: f64, e: f64| ScanCell {
            z0,
            d: 0.0,
            status: CellStatus::Ok,
            record: Some(CellRecord { p_g10: p, p_g21: 1.0 - p - e, p_e0: e, concurrence: 0.0 }),
        };
        let grid = ScanGrid {
            z0_values: alloc::vec![],
            d_values: alloc::vec![],
            cells: alloc::vec![cell(1.0, 0.6, 0.0), cell(2.0, 0.5, 0.0), cell(3.0, 0.4, 0.0), cell(4.0, 0.5, 0.2)],
        };
        let pts = locate_operating_points(&grid, 0.5, 0.15, 0.1);
        let z: Vec<f64> = pts.iter().map(|p| p.z0).collect();
        assert_eq!(z, alloc::vec![2.0, 1.0, 3.0]);
    }
}
