//! JSON scenario files.
//!
//! ```json
//! {
//!   "roads": [
//!     {"v_max": 1.0, "rho_max": 1.0, "initial": 0.6},
//!     {"v_max": 1.0, "rho_max": 1.0, "initial": [{"from": -1.0, "to": -0.5, "value": 0.2},
//!                                                {"from": -0.5, "to": 0.0, "value": 0.35}]},
//!     {"v_max": 1.0, "rho_max": 1.2, "initial": 0.35}
//!   ],
//!   "cells": 1000, "cfl": 0.9, "final_time": 1.0,
//!   "solver": "relaxation", "snapshots": [0.5], "output_dir": "out"
//! }
//! ```
//!
//! Unknown keys are rejected and reported with their path.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamentals::FundamentalDiagram;
use crate::simulation::{InitialProfile, RoadSpec, Scenario, Segment, SolverChoice};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub roads: Vec<RoadConfig>,
    pub cells: usize,
    pub cfl: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub final_time: f64,
    pub solver: SolverChoice,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadConfig {
    pub v_max: f64,
    pub rho_max: f64,
    pub initial: InitialConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialConfig {
    Constant(f64),
    Segments(Vec<SegmentConfig>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(format!("{path}: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        if self.roads.len() != 3 {
            return Err(Error::config(format!("roads: expected 3 entries, got {}", self.roads.len())));
        }
        let mut specs = Vec::with_capacity(3);
        for (i, road) in self.roads.iter().enumerate() {
            let diagram = FundamentalDiagram::new(road.v_max, road.rho_max)
                .map_err(|e| Error::config(format!("roads[{i}]: {e}")))?;
            let initial = match &road.initial {
                InitialConfig::Constant(v) => InitialProfile::Constant(*v),
                InitialConfig::Segments(segs) => InitialProfile::Piecewise(
                    segs.iter()
                        .map(|s| Segment {
                            from: s.from,
                            to: s.to,
                            value: s.value,
                        })
                        .collect(),
                ),
            };
            specs.push(RoadSpec { diagram, initial });
        }
        let scenario = Scenario {
            roads: specs.try_into().expect("three roads"),
            cells: self.cells,
            cfl: self.cfl,
            lambda: self.lambda,
            final_time: self.final_time,
            solver: self.solver,
            snapshot_times: self.snapshots.clone(),
        };
        scenario.validate().map_err(|e| match e {
            Error::Domain { value, rho_max } => {
                Error::config(format!("initial density {value} outside [0, {rho_max}]"))
            }
            other => other,
        })?;
        Ok(scenario)
    }

    pub fn from_scenario(scenario: &Scenario, output_dir: Option<PathBuf>) -> Self {
        let roads = scenario
            .roads
            .iter()
            .map(|r| RoadConfig {
                v_max: r.diagram.v_max(),
                rho_max: r.diagram.rho_max(),
                initial: match &r.initial {
                    InitialProfile::Constant(v) => InitialConfig::Constant(*v),
                    InitialProfile::Piecewise(segs) => InitialConfig::Segments(
                        segs.iter()
                            .map(|s| SegmentConfig {
                                from: s.from,
                                to: s.to,
                                value: s.value,
                            })
                            .collect(),
                    ),
                },
            })
            .collect();
        Self {
            roads,
            cells: scenario.cells,
            cfl: scenario.cfl,
            lambda: scenario.lambda,
            final_time: scenario.final_time,
            solver: scenario.solver,
            snapshots: scenario.snapshot_times.clone(),
            output_dir,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::Preset;

    const SAMPLE: &str = r#"{
        "roads": [
            {"v_max": 1.0, "rho_max": 1.0, "initial": 0.6},
            {"v_max": 1.0, "rho_max": 1.0, "initial": [{"from": -1.0, "to": -0.5, "value": 0.2},
                                                        {"from": -0.5, "to": 0.0, "value": 0.35}]},
            {"v_max": 1.0, "rho_max": 1.2, "initial": 0.35}
        ],
        "cells": 10, "cfl": 0.9, "final_time": 1.0,
        "solver": "relaxation", "snapshots": [0.5], "output_dir": "out"
    }"#;

    #[test]
    fn parses_sample() {
        let cfg = ConfigFile::from_json(SAMPLE).unwrap();
        assert_eq!(cfg.output_dir, Some(PathBuf::from("out")));
        let sc = cfg.to_scenario().unwrap();
        assert_eq!(sc.solver, SolverChoice::Relaxation);
        let net = sc.initial_network().unwrap();
        assert_eq!(net.roads[1].cells[..5], [0.2; 5]);
        assert_eq!(net.roads[1].cells[5..], [0.35; 5]);
    }

    #[test]
    fn unknown_key_reports_path() {
        let text = SAMPLE.replace("\"v_max\": 1.0, \"rho_max\": 1.2", "\"v_max\": 1.0, \"rho_mx\": 1.2");
        let err = ConfigFile::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("roads[2]"), "{err}");
        assert!(err.contains("rho_mx"), "{err}");

        let text = SAMPLE.replace("\"cells\"", "\"cels\"");
        let err = ConfigFile::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("cels"), "{err}");
    }

    #[test]
    fn semantic_errors_are_config_errors() {
        let text = SAMPLE.replace("\"initial\": 0.6", "\"initial\": 1.6");
        let err = ConfigFile::from_json(&text).unwrap().to_scenario().unwrap_err();
        assert!(err.is_config(), "{err}");

        let text = SAMPLE.replace("\"solver\": \"relaxation\"", "\"solver\": \"godunov\"");
        assert!(ConfigFile::from_json(&text).is_err());
    }

    #[test]
    fn preset_round_trip() {
        let sc = Preset::Exp2.scenario(SolverChoice::Both);
        let cfg = ConfigFile::from_scenario(&sc, None);
        let back = ConfigFile::from_json(&cfg.to_json()).unwrap().to_scenario().unwrap();
        assert_eq!(back, sc);
    }
}
