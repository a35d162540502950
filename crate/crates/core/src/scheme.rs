//! First-order conservative update on the three roads of the merge.
//!
//! Interior faces use the Rusanov flux with the relaxation speed `lambda` as
//! dissipation. The junction faces take their fluxes from one of the nodal
//! solvers. The far end of each incoming road is closed (zero flux) and the
//! far end of the outgoing road is a zero-gradient outflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamentals::FundamentalDiagram;
use crate::junction::{solve_classical, solve_relaxation, CouplingResult, JunctionTrace, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Incoming,
    Outgoing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadGrid {
    /// 1-based road number.
    pub road_id: usize,
    pub diagram: FundamentalDiagram,
    pub domain: (f64, f64),
    pub orientation: Orientation,
    pub cells: Vec<f64>,
}

impl RoadGrid {
    /// Grid on the default domain: `(-1, 0)` for incoming roads, `(0, 1)`
    /// for the outgoing one.
    pub fn new(road_id: usize, diagram: FundamentalDiagram, orientation: Orientation, cells: Vec<f64>) -> Result<Self> {
        let domain = match orientation {
            Orientation::Incoming => (-1.0, 0.0),
            Orientation::Outgoing => (0.0, 1.0),
        };
        Self::with_domain(road_id, diagram, orientation, domain, cells)
    }

    pub fn with_domain(
        road_id: usize,
        diagram: FundamentalDiagram,
        orientation: Orientation,
        domain: (f64, f64),
        cells: Vec<f64>,
    ) -> Result<Self> {
        if cells.len() < 2 {
            return Err(Error::config(format!("road {road_id}: need at least 2 cells, got {}", cells.len())));
        }
        if !(domain.0.is_finite() && domain.1.is_finite() && domain.1 > domain.0) {
            return Err(Error::config(format!("road {road_id}: empty domain {domain:?}")));
        }
        for &rho in &cells {
            diagram.check(rho)?;
        }
        Ok(Self {
            road_id,
            diagram,
            domain,
            orientation,
            cells,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dx(&self) -> f64 {
        (self.domain.1 - self.domain.0) / self.cells.len() as f64
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.len()).map(|j| self.domain.0 + (j as f64 + 0.5) * dx).collect()
    }

    pub fn mass(&self) -> f64 {
        self.cells.iter().sum::<f64>() * self.dx()
    }

    /// The cell adjacent to the junction.
    pub fn trace(&self) -> f64 {
        match self.orientation {
            Orientation::Incoming => self.cells[self.cells.len() - 1],
            Orientation::Outgoing => self.cells[0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeParams {
    pub lambda: f64,
    pub cfl: f64,
}

impl SchemeParams {
    pub const DEFAULT_CFL: f64 = 0.9;

    /// Validates the CFL number and the subcharacteristic condition
    /// `lambda >= max |f'|`, which for Greenshields roads is the largest
    /// `v_max`.
    pub fn new(lambda: f64, cfl: f64, diagrams: &[FundamentalDiagram]) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::config(format!("CFL number must lie in (0, 1], got {cfl}")));
        }
        let vmax = max_speed(diagrams);
        if !(lambda.is_finite() && lambda >= vmax) {
            return Err(Error::config(format!(
                "lambda = {lambda} violates the subcharacteristic condition lambda >= {vmax}"
            )));
        }
        Ok(Self { lambda, cfl })
    }

    /// Tightest admissible relaxation speed for the given roads.
    pub fn with_default_lambda(cfl: f64, diagrams: &[FundamentalDiagram]) -> Result<Self> {
        Self::new(max_speed(diagrams), cfl, diagrams)
    }
}

fn max_speed(diagrams: &[FundamentalDiagram]) -> f64 {
    diagrams.iter().map(|d| d.v_max()).fold(0.0, f64::max)
}

pub fn time_step(params: &SchemeParams, dx: f64) -> f64 {
    params.cfl * dx / params.lambda
}

/// Rusanov flux between two neighbouring cells.
pub fn interior_flux(d: &FundamentalDiagram, rho_left: f64, rho_right: f64, lambda: f64) -> Result<f64> {
    let fl = d.flux(rho_left)?;
    let fr = d.flux(rho_right)?;
    Ok(rusanov(fl, fr, rho_left, rho_right, lambda))
}

#[inline]
fn rusanov(fl: f64, fr: f64, rho_left: f64, rho_right: f64, lambda: f64) -> f64 {
    0.5 * (fr + fl) - 0.5 * lambda * (rho_right - rho_left)
}

/// The three roads of the merge: two incoming, one outgoing.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub roads: [RoadGrid; 3],
}

impl Network {
    pub fn new(roads: [RoadGrid; 3]) -> Result<Self> {
        let expected = [Orientation::Incoming, Orientation::Incoming, Orientation::Outgoing];
        for (road, want) in roads.iter().zip(expected) {
            if road.orientation != want {
                return Err(Error::config(format!("road {} must be {want:?}", road.road_id)));
            }
        }
        let dx = roads[0].dx();
        if roads.iter().any(|r| (r.dx() - dx).abs() > 1e-12 * dx.max(1.0)) {
            return Err(Error::config("all roads must share the same cell size"));
        }
        Ok(Self { roads })
    }

    pub fn diagrams(&self) -> [FundamentalDiagram; 3] {
        [self.roads[0].diagram, self.roads[1].diagram, self.roads[2].diagram]
    }

    pub fn dx(&self) -> f64 {
        self.roads[0].dx()
    }

    pub fn trace(&self) -> [f64; 3] {
        [self.roads[0].trace(), self.roads[1].trace(), self.roads[2].trace()]
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub network: Network,
    pub coupling: CouplingResult,
    /// Flux leaving the outgoing road through its far boundary.
    pub outflow: f64,
}

/// Evaluates the nodal solver on the current trace. The relaxation solver
/// receives the equilibrium flux variables `v = f(rho)`.
pub fn junction_fluxes(network: &Network, lambda: f64, solver: SolverKind) -> Result<CouplingResult> {
    let diagrams = network.diagrams();
    let rho = network.trace();
    match solver {
        SolverKind::Classical => solve_classical(rho, &diagrams),
        SolverKind::Relaxation => solve_relaxation(&JunctionTrace::equilibrium(rho, &diagrams)?, &diagrams, lambda),
    }
}

/// One conservative update of all three roads with time step `dt`.
pub fn step_network(network: &Network, params: &SchemeParams, solver: SolverKind, dt: f64) -> Result<StepOutcome> {
    let coupling = junction_fluxes(network, params.lambda, solver)?;
    let lambda = params.lambda;
    let ratio = dt / network.dx();
    let mut outflow = 0.0;

    let mut roads = network.roads.clone();
    for (k, road) in roads.iter_mut().enumerate() {
        let old = &network.roads[k].cells;
        let m = old.len();
        let fluxes = old
            .iter()
            .map(|&rho| road.diagram.flux(rho))
            .collect::<Result<Vec<_>>>()?;

        // faces[j] is the flux through the left edge of cell j
        let mut faces = Vec::with_capacity(m + 1);
        match road.orientation {
            Orientation::Incoming => faces.push(0.0),
            Orientation::Outgoing => faces.push(coupling.flux[k]),
        }
        for j in 1..m {
            faces.push(rusanov(fluxes[j - 1], fluxes[j], old[j - 1], old[j], lambda));
        }
        match road.orientation {
            Orientation::Incoming => faces.push(coupling.flux[k]),
            Orientation::Outgoing => {
                // ghost cell equal to the last cell
                outflow = fluxes[m - 1];
                faces.push(outflow);
            }
        }

        for (j, cell) in road.cells.iter_mut().enumerate() {
            *cell = old[j] - ratio * (faces[j + 1] - faces[j]);
        }
    }

    Ok(StepOutcome {
        network: Network { roads },
        coupling,
        outflow,
    })
}
