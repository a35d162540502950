//! CSV profiles and JSON summaries.
//!
//! Numbers go out with 17 significant digits, `.` as decimal separator and
//! `\n` line endings, so runs can be compared bit for bit from the files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::junction::{Branch, SolverKind};
use crate::scheme::RoadGrid;
use crate::simulation::{Comparison, DensityRange, MassAudit, RoadDifference, SimulationResult};

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn profile_csv(centers: &[f64], rho: &[f64]) -> String {
    let mut s = String::with_capacity(48 * rho.len() + 6);
    s.push_str("x,rho\n");
    for (x, r) in centers.iter().zip(rho) {
        let _ = writeln!(s, "{},{}", fmt_num(*x), fmt_num(*r));
    }
    s
}

pub fn junction_csv(result: &SimulationResult) -> String {
    let mut s = String::from("t,f1,f2,f3\n");
    for rec in &result.junction {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_num(rec.t),
            fmt_num(rec.flux[0]),
            fmt_num(rec.flux[1]),
            fmt_num(rec.flux[2])
        );
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct RoadSummary {
    pub road: usize,
    /// Extremes over the whole run.
    pub range: DensityRange,
    /// Extremes of the final profile.
    pub final_range: DensityRange,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub solver: SolverKind,
    pub final_time: f64,
    pub cells: usize,
    pub steps: usize,
    pub lambda: f64,
    pub cfl: f64,
    pub mass: MassAudit,
    pub roads: Vec<RoadSummary>,
    pub branch_histogram: BTreeMap<Branch, usize>,
    pub fallback_count: usize,
    pub degenerate_ratio_count: usize,
    pub max_kirchhoff_residual: f64,
    pub wall_time_s: f64,
}

impl RunSummary {
    pub fn new(result: &SimulationResult) -> Self {
        let roads = result
            .network
            .roads
            .iter()
            .enumerate()
            .map(|(k, g)| RoadSummary {
                road: k + 1,
                range: result.extrema[k],
                final_range: DensityRange {
                    min: g.cells.iter().copied().fold(f64::INFINITY, f64::min),
                    max: g.cells.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                },
            })
            .collect();
        Self {
            solver: result.solver,
            final_time: result.final_time,
            cells: result.network.roads[0].len(),
            steps: result.steps(),
            lambda: result.params.lambda,
            cfl: result.params.cfl,
            mass: result.mass,
            roads,
            branch_histogram: result.diagnostics.branch_histogram.clone(),
            fallback_count: result.diagnostics.fallback_count,
            degenerate_ratio_count: result.diagnostics.degenerate_ratio_count,
            max_kirchhoff_residual: result.diagnostics.max_kirchhoff_residual,
            wall_time_s: result.wall_time.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSummary {
    pub relaxation: RunSummary,
    pub classical: RunSummary,
    pub differences: Vec<RoadDifference>,
    pub junction_flux_max_diff: [f64; 3],
}

impl ComparisonSummary {
    pub fn new(cmp: &Comparison) -> Self {
        Self {
            relaxation: RunSummary::new(&cmp.relaxation),
            classical: RunSummary::new(&cmp.classical),
            differences: cmp.roads.to_vec(),
            junction_flux_max_diff: cmp.junction_flux_max_diff,
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> io::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    written.push(path);
    Ok(())
}

/// Writes `road<k>_t<time>.csv` for every snapshot, `road<k>.csv` for the
/// final state, `junction_fluxes.csv` and `summary.json`.
pub fn write_outputs(result: &SimulationResult, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let centers: Vec<Vec<f64>> = result.network.roads.iter().map(RoadGrid::cell_centers).collect();

    for snap in &result.snapshots {
        for k in 0..3 {
            let name = format!("road{}_t{}.csv", k + 1, snap.time);
            write_file(dir, &name, &profile_csv(&centers[k], &snap.densities[k]), &mut written)?;
        }
    }
    for k in 0..3 {
        let name = format!("road{}.csv", k + 1);
        let csv = profile_csv(&centers[k], &result.network.roads[k].cells);
        write_file(dir, &name, &csv, &mut written)?;
    }
    write_file(dir, "junction_fluxes.csv", &junction_csv(result), &mut written)?;
    let summary = serde_json::to_string_pretty(&RunSummary::new(result)).map_err(io::Error::other)?;
    write_file(dir, "summary.json", &summary, &mut written)?;
    Ok(written)
}

/// Per-solver outputs in `relaxation/` and `classical/`, plus a top-level
/// `summary.json` with the difference norms.
pub fn write_comparison(cmp: &Comparison, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut written = write_outputs(&cmp.relaxation, &dir.join("relaxation"))?;
    written.extend(write_outputs(&cmp.classical, &dir.join("classical"))?);
    let summary = serde_json::to_string_pretty(&ComparisonSummary::new(cmp)).map_err(io::Error::other)?;
    write_file(dir, "summary.json", &summary, &mut written)?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.15), "1.4999999999999999e-1");
        assert_eq!(fmt_num(-0.875), "-8.7500000000000000e-1");
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn profile_layout() {
        let csv = profile_csv(&[-0.75, -0.25], &[0.5, 0.25]);
        assert_eq!(csv, "x,rho\n-7.5000000000000000e-1,5.0000000000000000e-1\n-2.5000000000000000e-1,2.5000000000000000e-1\n");
        assert!(!csv.contains('\r'));
    }
}
