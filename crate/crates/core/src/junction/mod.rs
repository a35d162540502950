//! Nodal Riemann solvers for a merge with two incoming roads (indices 0, 1)
//! and one outgoing road (index 2).
//!
//! Two solvers are provided:
//!
//! * [`solve_relaxation`] works on the relaxation variables `(rho, v)`.
//!   Coupling states are tied to the trace by linear waves of strength
//!   `sigma_k`, Kirchhoff is imposed on both `rho V(rho)` and `v`, and the
//!   incoming wave strengths are locked to the influx ratios. This leaves a
//!   single quadratic in the outgoing strength.
//! * [`solve_classical`] is the demand/supply solver: total flow is
//!   maximised first and the influx ratios are only used to split the
//!   outgoing supply in congestion.

mod classical;
mod relaxation;

pub use classical::solve_classical;
pub use relaxation::{lemma1_check, solve_relaxation, Lemma1Case, Lemma1Report, QuadraticSetup};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Total influx below which the influx ratios are treated as undefined.
pub const FLUX_EPS: f64 = 1e-14;

/// Trace data: the states in the cells adjacent to the junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionTrace {
    pub rho: [f64; 3],
    /// Relaxation flux variable per road; equals `f_k(rho_k)` in equilibrium.
    pub v: [f64; 3],
}

impl JunctionTrace {
    pub fn new(rho: [f64; 3], v: [f64; 3]) -> Self {
        Self { rho, v }
    }

    /// Trace in local equilibrium, `v_k = f_k(rho_k)`.
    pub fn equilibrium(
        rho: [f64; 3],
        diagrams: &[crate::FundamentalDiagram; 3],
    ) -> crate::Result<Self> {
        let mut v = [0.0; 3];
        for k in 0..3 {
            v[k] = diagrams[k].flux(rho[k])?;
        }
        Ok(Self { rho, v })
    }
}

/// Strengths of the linear waves joining trace and coupling states, in
/// density units. Unrelated to the critical density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveStrengths {
    pub sigma: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfluxRatios {
    pub r1: f64,
    pub r2: f64,
    /// Set when the total influx vanished and the even split was used.
    pub degenerate: bool,
}

/// Fractions of the total influx carried by each incoming road. Negative
/// inputs count as zero; a vanishing total gives `(1/2, 1/2)`.
pub fn influx_ratios(v1: f64, v2: f64) -> InfluxRatios {
    let (a, b) = (v1.max(0.0), v2.max(0.0));
    let total = a + b;
    if total > FLUX_EPS {
        let r1 = a / total;
        InfluxRatios {
            r1,
            r2: 1.0 - r1,
            degenerate: false,
        }
    } else {
        InfluxRatios {
            r1: 0.5,
            r2: 0.5,
            degenerate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    FreeFlow,
    Congestion,
    Clipped1,
    Clipped2,
    DegenerateRatio,
    Quadratic,
    FallbackVertex,
    FallbackLinear,
    Degenerate,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::FreeFlow => "free-flow",
            Branch::Congestion => "congestion",
            Branch::Clipped1 => "clipped-1",
            Branch::Clipped2 => "clipped-2",
            Branch::DegenerateRatio => "degenerate-ratio",
            Branch::Quadratic => "quadratic",
            Branch::FallbackVertex => "fallback-vertex",
            Branch::FallbackLinear => "fallback-linear",
            Branch::Degenerate => "degenerate",
        }
    }

    /// Branches in which the relaxation solver could not satisfy the flux
    /// Kirchhoff condition exactly.
    pub fn is_fallback(self) -> bool {
        matches!(self, Branch::FallbackVertex | Branch::Degenerate)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub branch: Branch,
    pub degenerate_ratio: bool,
    pub discriminant: Option<f64>,
    pub sigma: Option<WaveStrengths>,
    /// `f1(rho_1) + f2(rho_2) - f3(rho_3)` at the coupling densities
    /// (relaxation) or `f1 + f2 - f3` of the coupling fluxes (classical).
    pub kirchhoff_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingResult {
    /// Coupling densities; the classical solver maps to fluxes only.
    pub rho: Option<[f64; 3]>,
    /// Fluxes handed to the junction faces of the scheme.
    pub flux: [f64; 3],
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Relaxation,
    Classical,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Relaxation => "relaxation",
            SolverKind::Classical => "classical",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
