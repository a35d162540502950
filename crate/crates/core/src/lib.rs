//! Lighthill-Whitham-Richards traffic on a merge of two roads into one.
//!
//! The crate provides the Greenshields fundamental diagram, two nodal
//! Riemann solvers for the merge (a relaxation-based solver that preserves
//! influx ratios without flow maximisation, and the demand/supply solver),
//! a first-order finite-volume scheme that uses either of them at the
//! junction, and a driver with presets for the three reference experiments.

pub mod cli;
pub mod config;
pub mod error;
pub mod fundamentals;
pub mod junction;
pub mod output;
pub mod scheme;
pub mod simulation;

pub use error::{Error, Result};
pub use fundamentals::FundamentalDiagram;
pub use junction::{
    influx_ratios, lemma1_check, solve_classical, solve_relaxation, Branch, CouplingResult, JunctionTrace,
    QuadraticSetup, SolverKind,
};
pub use scheme::{interior_flux, step_network, time_step, Network, Orientation, RoadGrid, SchemeParams};
pub use simulation::{compare, run, run_with, total_mass, Comparison, Preset, Scenario, SimulationResult, SolverChoice};
