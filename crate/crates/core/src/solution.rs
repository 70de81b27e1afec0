//! The result document written by `swarmcov solve`.
//!
//! Everything in it is a deterministic function of the map, UAV count and GA
//! configuration, so rerunning a solve reproduces the file byte for byte.
//! Wall time is reported on the terminal only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolve::{GaConfig, GaRunResult};
use crate::gridmap::{Coord, GridMap, MapError};
use crate::sim::{Scenario, SimError};

pub const RESULT_FORMAT: &str = "swarmcov-result";
pub const RESULT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ResultError {
    #[error("not a result document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported result format {format} v{version}")]
    Format { format: String, version: u32 },
    #[error("embedded map: {0}")]
    Map(#[from] MapError),
    #[error("result has no paths")]
    NoPaths,
}

/// Inputs that fully determine a solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub map: String,
    pub uavs: usize,
    pub ga: GaConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub format: String,
    pub version: u32,
    pub config: SolveConfig,
    /// The map in map-file syntax, so the document is self-contained.
    pub map_text: String,
    pub covered: bool,
    pub fitness: u32,
    pub epochs_used: u32,
    pub unvisited: usize,
    pub bound: u32,
    pub max_epochs: u32,
    pub generations_executed: usize,
    pub evaluations: u64,
    /// Per-UAV positions: the start, then one entry per epoch.
    pub paths: Vec<Vec<Coord>>,
    /// Per-UAV movement maps in `^v<>` notation, one string per grid row.
    pub movement_maps: Vec<Vec<String>>,
    pub genotype: Vec<f64>,
}

impl ResultDocument {
    pub fn new(
        config: SolveConfig,
        scenario: &Scenario,
        run: &GaRunResult,
    ) -> Result<Self, SimError> {
        let maps = scenario.movement_maps(&run.best_genotype)?;
        let map = scenario.map();
        let sim = &run.best_sim;
        Ok(ResultDocument {
            format: RESULT_FORMAT.into(),
            version: RESULT_VERSION,
            config,
            map_text: map.to_text(),
            covered: sim.covered,
            fitness: sim.fitness,
            epochs_used: sim.epochs_used,
            unvisited: sim.unvisited,
            bound: scenario.min_epochs(),
            max_epochs: scenario.max_epochs(),
            generations_executed: run.generations_executed,
            evaluations: run.evaluations,
            paths: sim.paths.clone(),
            movement_maps: maps
                .iter()
                .map(|m| m.to_rows(map, scenario.topology()))
                .collect(),
            genotype: run.best_genotype.genes().to_vec(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ResultError> {
        let doc: ResultDocument = serde_json::from_str(text)?;
        if doc.format != RESULT_FORMAT || doc.version != RESULT_VERSION {
            return Err(ResultError::Format {
                format: doc.format,
                version: doc.version,
            });
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    /// The embedded map, named after the configured map reference.
    pub fn map(&self) -> Result<GridMap, ResultError> {
        Ok(GridMap::parse(self.config.map.clone(), &self.map_text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::run_ga_on;
    use crate::gridmap::builtin;

    fn doc() -> ResultDocument {
        let map = builtin("map2").unwrap();
        let scenario = Scenario::new(&map, 2).unwrap();
        let ga = GaConfig {
            population_size: 30,
            generations: 5,
            seed: 3,
            ..GaConfig::default()
        };
        let run = run_ga_on(&ga, &scenario).unwrap();
        let config = SolveConfig {
            map: "map2".into(),
            uavs: 2,
            ga,
        };
        ResultDocument::new(config, &scenario, &run).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let d = doc();
        let text = d.to_json();
        assert!(text.contains("\"format\": \"swarmcov-result\""));
        let back = ResultDocument::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.map().unwrap().visitable_count(), 21);
        assert_eq!(back.movement_maps.len(), 2);
        assert_eq!(back.movement_maps[0].len(), 5);
        assert_eq!(doc().to_json(), text);
    }

    #[test]
    fn rejects_foreign_documents() {
        let mut d = doc();
        d.format = "other".into();
        assert!(matches!(
            ResultDocument::from_json(&d.to_json()),
            Err(ResultError::Format { .. })
        ));
        assert!(matches!(
            ResultDocument::from_json("{}"),
            Err(ResultError::Json(_))
        ));
    }
}
