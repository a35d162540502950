//! Scenario assembly and the time loop.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamentals::FundamentalDiagram;
use crate::junction::{Branch, SolverKind};
use crate::scheme::{step_network, time_step, Network, Orientation, RoadGrid, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

/// Initial density on one road, in the road's own coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    Constant(f64),
    /// Piecewise constant; each cell takes the value of the segment holding
    /// its center. Segments are half-open `[from, to)` except that the last
    /// one also owns its right end.
    Piecewise(Vec<Segment>),
}

impl InitialProfile {
    fn sample(&self, centers: &[f64], road_id: usize) -> Result<Vec<f64>> {
        match self {
            InitialProfile::Constant(v) => Ok(vec![*v; centers.len()]),
            InitialProfile::Piecewise(segments) => centers
                .iter()
                .map(|&x| {
                    segments
                        .iter()
                        .enumerate()
                        .find(|(i, s)| x >= s.from && (x < s.to || (*i == segments.len() - 1 && x <= s.to)))
                        .map(|(_, s)| s.value)
                        .ok_or_else(|| Error::config(format!("road {road_id}: no initial segment covers x = {x}")))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadSpec {
    pub diagram: FundamentalDiagram,
    pub initial: InitialProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Relaxation,
    Classical,
    Both,
}

impl SolverChoice {
    pub fn kinds(self) -> Vec<SolverKind> {
        match self {
            SolverChoice::Relaxation => vec![SolverKind::Relaxation],
            SolverChoice::Classical => vec![SolverKind::Classical],
            SolverChoice::Both => vec![SolverKind::Relaxation, SolverKind::Classical],
        }
    }
}

impl From<SolverKind> for SolverChoice {
    fn from(k: SolverKind) -> Self {
        match k {
            SolverKind::Relaxation => SolverChoice::Relaxation,
            SolverKind::Classical => SolverChoice::Classical,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub roads: [RoadSpec; 3],
    pub cells: usize,
    pub cfl: f64,
    /// Relaxation speed; defaults to the largest `v_max`.
    pub lambda: Option<f64>,
    pub final_time: f64,
    pub solver: SolverChoice,
    pub snapshot_times: Vec<f64>,
}

impl Scenario {
    pub fn diagrams(&self) -> [FundamentalDiagram; 3] {
        [self.roads[0].diagram, self.roads[1].diagram, self.roads[2].diagram]
    }

    pub fn params(&self) -> Result<SchemeParams> {
        let d = self.diagrams();
        match self.lambda {
            Some(l) => SchemeParams::new(l, self.cfl, &d),
            None => SchemeParams::with_default_lambda(self.cfl, &d),
        }
    }

    pub fn initial_network(&self) -> Result<Network> {
        if self.cells < 2 {
            return Err(Error::config(format!("need at least 2 cells per road, got {}", self.cells)));
        }
        let orient = [Orientation::Incoming, Orientation::Incoming, Orientation::Outgoing];
        let mut grids = Vec::with_capacity(3);
        for (k, spec) in self.roads.iter().enumerate() {
            let blank = RoadGrid::new(k + 1, spec.diagram, orient[k], vec![0.0; self.cells])?;
            let cells = spec.initial.sample(&blank.cell_centers(), k + 1)?;
            let grid = RoadGrid::new(k + 1, spec.diagram, orient[k], cells)
                .map_err(|e| Error::config(format!("road {}: initial data: {e}", k + 1)))?;
            grids.push(grid);
        }
        let roads: [RoadGrid; 3] = grids.try_into().expect("three roads");
        Network::new(roads)
    }

    /// Sorted, deduplicated output times, always ending with the final time.
    pub fn output_times(&self) -> Result<Vec<f64>> {
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return Err(Error::config(format!("final time must be positive, got {}", self.final_time)));
        }
        let mut times = self.snapshot_times.clone();
        if let Some(bad) = times.iter().find(|t| !(**t >= 0.0 && **t <= self.final_time)) {
            return Err(Error::config(format!("snapshot time {bad} outside [0, {}]", self.final_time)));
        }
        times.push(self.final_time);
        times.sort_by(f64::total_cmp);
        times.dedup();
        Ok(times)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.initial_network()?;
        self.output_times()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Exp1,
    Exp2,
    Exp3,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Exp1, Preset::Exp2, Preset::Exp3];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Exp1 => "exp1",
            Preset::Exp2 => "exp2",
            Preset::Exp3 => "exp3",
        }
    }

    pub fn initial_densities(self) -> [f64; 3] {
        match self {
            Preset::Exp1 => [0.15, 0.2, 0.3],
            Preset::Exp2 => [0.6, 0.35, 0.35],
            Preset::Exp3 => [0.5, 0.8, 0.6],
        }
    }

    pub fn final_time(self) -> f64 {
        match self {
            Preset::Exp1 => 0.75,
            Preset::Exp2 | Preset::Exp3 => 1.0,
        }
    }

    /// Two unit roads merging into a road with stagnation density 1.2,
    /// Riemann data, 1000 cells per road.
    pub fn scenario(self, solver: SolverChoice) -> Scenario {
        let rho = self.initial_densities();
        let road = |rho_max: f64, v: f64| RoadSpec {
            diagram: FundamentalDiagram::new(1.0, rho_max).expect("valid preset diagram"),
            initial: InitialProfile::Constant(v),
        };
        Scenario {
            roads: [road(1.0, rho[0]), road(1.0, rho[1]), road(1.2, rho[2])],
            cells: 1000,
            cfl: SchemeParams::DEFAULT_CFL,
            lambda: None,
            final_time: self.final_time(),
            solver,
            snapshot_times: Vec::new(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp1" => Ok(Preset::Exp1),
            "exp2" => Ok(Preset::Exp2),
            "exp3" => Ok(Preset::Exp3),
            other => Err(Error::config(format!("unknown preset {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub densities: [Vec<f64>; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionRecord {
    /// Time at the start of the step.
    pub t: f64,
    pub dt: f64,
    pub flux: [f64; 3],
    pub branch: Branch,
    pub kirchhoff_residual: f64,
    pub discriminant: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassAudit {
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_mass: f64,
    /// Accumulated `dt * F` through the outflow boundary.
    pub outflow: f64,
    /// `final - initial + outflow`; zero up to round-off.
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SolverDiagnostics {
    pub branch_histogram: BTreeMap<Branch, usize>,
    /// Steps in which the flux Kirchhoff condition could not be met exactly.
    pub fallback_count: usize,
    pub degenerate_ratio_count: usize,
    pub max_kirchhoff_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRange {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub solver: SolverKind,
    pub params: SchemeParams,
    pub final_time: f64,
    pub network: Network,
    pub snapshots: Vec<Snapshot>,
    pub junction: Vec<JunctionRecord>,
    pub mass: MassAudit,
    pub diagnostics: SolverDiagnostics,
    /// Per-road extremes over the initial data and every step.
    pub extrema: [DensityRange; 3],
    pub wall_time: Duration,
}

impl SimulationResult {
    pub fn steps(&self) -> usize {
        self.junction.len()
    }
}

pub fn total_mass(network: &Network) -> f64 {
    network.roads.iter().map(RoadGrid::mass).sum()
}

/// Runs the scenario with its single configured solver.
pub fn run(scenario: &Scenario) -> Result<SimulationResult> {
    match scenario.solver {
        SolverChoice::Relaxation => run_with(scenario, SolverKind::Relaxation),
        SolverChoice::Classical => run_with(scenario, SolverKind::Classical),
        SolverChoice::Both => Err(Error::config("solver \"both\" needs compare, not run")),
    }
}

pub fn run_with(scenario: &Scenario, solver: SolverKind) -> Result<SimulationResult> {
    let started = Instant::now();
    let params = scenario.params()?;
    let mut network = scenario.initial_network()?;
    let targets = scenario.output_times()?;
    let dt_max = time_step(&params, network.dx());

    let initial = total_mass(&network);
    let mut outflow = 0.0;
    let mut t = 0.0;
    let mut junction = Vec::new();
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut diagnostics = SolverDiagnostics::default();
    let mut extrema = [0, 1, 2].map(|k| range_of(&network.roads[k].cells));

    for &target in &targets {
        while t < target {
            let remaining = target - t;
            let dt = if remaining <= dt_max { remaining } else { dt_max };
            let step = junction.len();
            let out = step_network(&network, &params, solver, dt).map_err(|e| Error::Step {
                step,
                time: t,
                source: Box::new(e),
            })?;

            let diag = out.coupling.diagnostics;
            *diagnostics.branch_histogram.entry(diag.branch).or_default() += 1;
            if diag.branch.is_fallback() {
                diagnostics.fallback_count += 1;
            }
            if diag.degenerate_ratio {
                diagnostics.degenerate_ratio_count += 1;
            }
            diagnostics.max_kirchhoff_residual = diagnostics.max_kirchhoff_residual.max(diag.kirchhoff_residual.abs());
            junction.push(JunctionRecord {
                t,
                dt,
                flux: out.coupling.flux,
                branch: diag.branch,
                kirchhoff_residual: diag.kirchhoff_residual,
                discriminant: diag.discriminant,
            });

            outflow += dt * out.outflow;
            network = out.network;
            for (k, range) in extrema.iter_mut().enumerate() {
                let r = range_of(&network.roads[k].cells);
                range.min = range.min.min(r.min);
                range.max = range.max.max(r.max);
            }
            t = if dt == remaining { target } else { t + dt };
        }
        snapshots.push(Snapshot {
            time: target,
            densities: [0, 1, 2].map(|k| network.roads[k].cells.clone()),
        });
    }

    let final_mass = total_mass(&network);
    Ok(SimulationResult {
        solver,
        params,
        final_time: scenario.final_time,
        network,
        snapshots,
        junction,
        mass: MassAudit {
            initial,
            final_mass,
            outflow,
            defect: final_mass - initial + outflow,
        },
        diagnostics,
        extrema,
        wall_time: started.elapsed(),
    })
}

fn range_of(cells: &[f64]) -> DensityRange {
    cells.iter().fold(
        DensityRange {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        },
        |r, &c| DensityRange {
            min: r.min.min(c),
            max: r.max.max(c),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoadDifference {
    pub road: usize,
    /// `sum |relaxation - classical| / sum |classical|` at the final time.
    pub rel_l1: f64,
    pub rel_linf: f64,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub relaxation: SimulationResult,
    pub classical: SimulationResult,
    pub roads: [RoadDifference; 3],
    /// Largest per-step difference of the junction fluxes, per road.
    pub junction_flux_max_diff: [f64; 3],
}

/// Runs both solvers on identical input, in parallel, and measures how far
/// their final states and junction fluxes are apart. The classical run is
/// the reference for relative norms.
pub fn compare(scenario: &Scenario) -> Result<Comparison> {
    scenario.validate()?;
    let (relaxation, classical) = std::thread::scope(|s| {
        let relax = s.spawn(|| run_with(scenario, SolverKind::Relaxation));
        let classical = run_with(scenario, SolverKind::Classical);
        (relax.join().expect("relaxation run panicked"), classical)
    });
    let (relaxation, classical) = (relaxation?, classical?);

    let roads = [0, 1, 2].map(|k| {
        let a = &relaxation.network.roads[k].cells;
        let b = &classical.network.roads[k].cells;
        let l1: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
        let linf = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let norm1: f64 = b.iter().map(|y| y.abs()).sum();
        let norminf = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
        RoadDifference {
            road: k + 1,
            rel_l1: relative(l1, norm1),
            rel_linf: relative(linf, norminf),
        }
    });

    let mut junction_flux_max_diff = [0.0f64; 3];
    for (ra, rb) in relaxation.junction.iter().zip(&classical.junction) {
        for k in 0..3 {
            junction_flux_max_diff[k] = junction_flux_max_diff[k].max((ra.flux[k] - rb.flux[k]).abs());
        }
    }

    Ok(Comparison {
        relaxation,
        classical,
        roads,
        junction_flux_max_diff,
    })
}

fn relative(diff: f64, norm: f64) -> f64 {
    if norm > 0.0 {
        diff / norm
    } else {
        diff
    }
}
