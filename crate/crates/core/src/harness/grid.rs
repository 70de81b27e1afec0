use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::records::{RecordKey, RecordSink, RunRecord};
use super::HarnessError;
use crate::evolve::{run_ga_on, CrossoverKind, GaConfig};
use crate::gridmap::{self, GridMap};
use crate::sim::Scenario;

/// GA operator settings shared by every run of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaOperators {
    pub crossover_rate: f64,
    pub crossover: CrossoverKind,
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub elitism: usize,
    pub early_stop_at_lower_bound: bool,
}

impl Default for GaOperators {
    fn default() -> Self {
        let ga = GaConfig::default();
        Self {
            crossover_rate: ga.crossover_rate,
            crossover: ga.crossover,
            mutation_rate: ga.mutation_rate,
            tournament_size: ga.tournament_size,
            elitism: ga.elitism,
            // Fixed-generation runs keep timings comparable across cells.
            early_stop_at_lower_bound: false,
        }
    }
}

impl GaOperators {
    pub fn config(&self, population_size: usize, generations: usize, seed: u64) -> GaConfig {
        GaConfig {
            population_size,
            generations,
            crossover_rate: self.crossover_rate,
            crossover: self.crossover,
            mutation_rate: self.mutation_rate,
            tournament_size: self.tournament_size,
            elitism: self.elitism,
            seed,
            early_stop_at_lower_bound: self.early_stop_at_lower_bound,
        }
    }
}

/// The experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentGrid {
    /// Built-in map names or map file paths.
    pub maps: Vec<String>,
    pub uav_counts: Vec<usize>,
    pub population_sizes: Vec<usize>,
    pub generation_counts: Vec<usize>,
    pub runs_per_cell: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub ga: GaOperators,
}

/// One run of the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpec {
    pub map_id: String,
    pub uavs: usize,
    pub population_size: usize,
    pub generations: usize,
    pub run_index: usize,
    pub seed: u64,
}

impl RunSpec {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            map_id: self.map_id.clone(),
            uavs: self.uavs,
            population_size: self.population_size,
            generations: self.generations,
            run_index: self.run_index,
            seed: self.seed,
        }
    }
}

impl ExperimentGrid {
    /// Six maps, 1 to 4 UAVs, populations 1000..5000, generations
    /// 100..500, 50 runs each: 30,000 runs.
    pub fn full() -> Self {
        Self {
            maps: (1..=6).map(|i| format!("map{i}")).collect(),
            uav_counts: vec![1, 2, 3, 4],
            population_sizes: vec![1000, 2000, 3000, 4000, 5000],
            generation_counts: vec![100, 200, 300, 400, 500],
            runs_per_cell: 50,
            base_seed: 2025,
            ga: GaOperators::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let grid: Self = toml::from_str(text).map_err(|e| HarnessError::Grid(e.to_string()))?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("grid serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: &str| Err(HarnessError::Grid(m.to_string()));
        if self.maps.is_empty() {
            return fail("maps is empty");
        }
        if self.uav_counts.is_empty() {
            return fail("uav_counts is empty");
        }
        if self.population_sizes.is_empty() {
            return fail("population_sizes is empty");
        }
        if self.generation_counts.is_empty() {
            return fail("generation_counts is empty");
        }
        if self.runs_per_cell == 0 {
            return fail("runs_per_cell must be at least 1");
        }
        if let Some(&n) = self.uav_counts.iter().find(|n| !(1..=4).contains(*n)) {
            return Err(HarnessError::Grid(format!("uav count {n} outside 1..=4")));
        }
        for &p in &self.population_sizes {
            for &g in &self.generation_counts {
                self.ga
                    .config(p, g, 0)
                    .validate()
                    .map_err(|e| HarnessError::Grid(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.maps.len()
            * self.uav_counts.len()
            * self.population_sizes.len()
            * self.generation_counts.len()
            * self.runs_per_cell
    }

    /// Every run in canonical order: map, UAVs, population, generations, run.
    /// `map_ids` gives the record id for each entry of `maps`.
    pub fn jobs(&self, map_ids: &[String]) -> Vec<RunSpec> {
        let mut jobs = Vec::with_capacity(self.run_count());
        for map_id in map_ids {
            for &uavs in &self.uav_counts {
                for &population_size in &self.population_sizes {
                    for &generations in &self.generation_counts {
                        for run_index in 0..self.runs_per_cell {
                            jobs.push(RunSpec {
                                map_id: map_id.clone(),
                                uavs,
                                population_size,
                                generations,
                                run_index,
                                seed: run_seed(
                                    self.base_seed,
                                    map_id,
                                    uavs,
                                    population_size,
                                    generations,
                                    run_index,
                                ),
                            });
                        }
                    }
                }
            }
        }
        jobs
    }
}

/// Seed of one run: the first 8 bytes (little endian) of the SHA-256 of a
/// canonical description of the run. Independent of run order and of which
/// other cells the grid contains.
pub fn run_seed(
    base_seed: u64,
    map_id: &str,
    uavs: usize,
    population_size: usize,
    generations: usize,
    run_index: usize,
) -> u64 {
    let key = format!(
        "swarmcov-run/v1|{base_seed}|{map_id}|{uavs}|{population_size}|{generations}|{run_index}"
    );
    let digest = Sha256::digest(key.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Resolves a built-in map name or a map file path. File maps take the file
/// stem as their id.
pub fn load_map(reference: &str) -> Result<GridMap, HarnessError> {
    if let Some(m) = gridmap::builtin(reference) {
        return Ok(m);
    }
    let path = Path::new(reference);
    let text =
        std::fs::read_to_string(path).map_err(|_| HarnessError::UnknownMap(reference.into()))?;
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(reference);
    GridMap::parse(id, &text).map_err(|source| HarnessError::MapFile {
        path: reference.into(),
        source,
    })
}

/// Executes one run and packages its record.
pub fn run_one(
    run: &RunSpec,
    scenario: &Scenario,
    ops: &GaOperators,
) -> Result<RunRecord, HarnessError> {
    let config = ops.config(run.population_size, run.generations, run.seed);
    let result = run_ga_on(&config, scenario)?;
    let covered = result.best_sim.covered;
    Ok(RunRecord {
        map_id: run.map_id.clone(),
        uavs: run.uavs,
        population_size: run.population_size,
        generations: run.generations,
        run_index: run.run_index,
        seed: run.seed,
        covered,
        best_fitness: result.best_fitness,
        best_epochs: covered.then_some(result.best_fitness),
        wall_time_seconds: result.wall_time,
        generations_executed: result.generations_executed,
        genotype: result.best_genotype.into_genes(),
        paths: result.best_sim.paths,
    })
}

/// Execution options for [`run_grid`].
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
    /// Runs already on record; they are not executed again.
    pub skip: HashSet<RecordKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSummary {
    pub total: usize,
    pub skipped: usize,
    pub executed: usize,
}

/// Runs every job of `grid` not listed in `options.skip` and appends the
/// records to `sink` in canonical job order, whatever order the workers
/// finish in. Stops at the first failure; records appended before it stay.
pub fn run_grid(
    grid: &ExperimentGrid,
    options: &RunOptions,
    sink: &mut dyn RecordSink,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<GridSummary, HarnessError> {
    grid.validate()?;
    let maps = grid
        .maps
        .iter()
        .map(|r| load_map(r))
        .collect::<Result<Vec<_>, _>>()?;
    let ids: Vec<String> = maps.iter().map(|m| m.id().to_string()).collect();

    let mut scenarios = HashMap::new();
    for m in &maps {
        for &n in &grid.uav_counts {
            scenarios.insert((m.id().to_string(), n), Scenario::new(m, n)?);
        }
    }

    let jobs = grid.jobs(&ids);
    let total = jobs.len();
    let todo: Vec<RunSpec> = jobs
        .into_iter()
        .filter(|j| !options.skip.contains(&j.key()))
        .collect();
    let summary = GridSummary {
        total,
        skipped: total - todo.len(),
        executed: todo.len(),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| HarnessError::Grid(format!("worker pool: {e}")))?;
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord, HarnessError>)>();

    std::thread::scope(|s| {
        let todo = &todo;
        let scenarios = &scenarios;
        let abort = &abort;
        s.spawn(move || {
            pool.install(|| {
                todo.par_iter()
                    .enumerate()
                    .for_each_with(tx, |tx, (i, job)| {
                        if abort.load(Ordering::Relaxed) {
                            return;
                        }
                        let scenario = &scenarios[&(job.map_id.clone(), job.uavs)];
                        let _ = tx.send((i, run_one(job, scenario, &grid.ga)));
                    });
            })
        });

        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, rec) in rx {
            pending.insert(i, rec);
            while let Some(rec) = pending.remove(&next) {
                let appended = rec.and_then(|r| sink.append(&r).map_err(HarnessError::Sink));
                if let Err(e) = appended {
                    abort.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                next += 1;
                progress(summary.skipped + next, total);
            }
        }
        Ok(())
    })?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentGrid {
        ExperimentGrid {
            maps: vec!["map2".into()],
            uav_counts: vec![2],
            population_sizes: vec![20],
            generation_counts: vec![3],
            runs_per_cell: 3,
            base_seed: 7,
            ga: GaOperators::default(),
        }
    }

    #[test]
    fn full_grid_has_30000_runs() {
        let g = ExperimentGrid::full();
        assert_eq!(g.run_count(), 30_000);
        let ids: Vec<String> = g.maps.clone();
        let jobs = g.jobs(&ids);
        assert_eq!(jobs.len(), 30_000);
        let seeds: HashSet<u64> = jobs.iter().map(|j| j.seed).collect();
        assert_eq!(seeds.len(), 30_000);
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = run_seed(1, "map1", 2, 1000, 100, 0);
        assert_eq!(a, run_seed(1, "map1", 2, 1000, 100, 0));
        assert_ne!(a, run_seed(1, "map1", 2, 1000, 100, 1));
        assert_ne!(a, run_seed(2, "map1", 2, 1000, 100, 0));
        assert_ne!(a, run_seed(1, "map2", 2, 1000, 100, 0));
    }

    #[test]
    fn toml_round_trip_and_errors() {
        let g = tiny();
        assert_eq!(ExperimentGrid::from_toml(&g.to_toml()).unwrap(), g);
        let err = ExperimentGrid::from_toml(
            "maps = [\"map1\"]\nuav_counts = [1]\npopulation_sizes = 5\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("line 3"), "{err}");
        let mut bad = tiny();
        bad.runs_per_cell = 0;
        assert!(ExperimentGrid::from_toml(&bad.to_toml()).is_err());
        bad = tiny();
        bad.uav_counts = vec![5];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn small_grid_runs_and_is_schedule_independent() {
        let g = tiny();
        let mut seq = Vec::new();
        let opts = RunOptions {
            workers: 1,
            ..Default::default()
        };
        let s = run_grid(&g, &opts, &mut seq, &mut |_, _| {}).unwrap();
        assert_eq!(
            s,
            GridSummary {
                total: 3,
                skipped: 0,
                executed: 3
            }
        );
        assert_eq!(seq.len(), 3);
        let seeds: HashSet<u64> = seq.iter().map(|r| r.seed).collect();
        assert_eq!(seeds.len(), 3);

        let mut par = Vec::new();
        let opts = RunOptions {
            workers: 4,
            ..Default::default()
        };
        run_grid(&g, &opts, &mut par, &mut |_, _| {}).unwrap();
        let strip = |rs: &[RunRecord]| {
            rs.iter()
                .map(|r| RunRecord {
                    wall_time_seconds: 0.0,
                    ..r.clone()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&seq), strip(&par));
    }

    #[test]
    fn resume_skips_recorded_runs() {
        let g = tiny();
        let mut first = Vec::new();
        run_grid(&g, &RunOptions::default(), &mut first, &mut |_, _| {}).unwrap();
        let skip = first[..2].iter().map(RunRecord::key).collect();
        let mut rest = Vec::new();
        let s = run_grid(
            &g,
            &RunOptions { workers: 2, skip },
            &mut rest,
            &mut |_, _| {},
        )
        .unwrap();
        assert_eq!((s.skipped, s.executed), (2, 1));
        assert_eq!(rest.len(), 1);
        assert_eq!(rest[0].key(), first[2].key());
        assert_eq!(rest[0].genotype, first[2].genotype);
    }

    #[test]
    fn unknown_map_is_reported() {
        let mut g = tiny();
        g.maps = vec!["no-such-map".into()];
        let err = run_grid(&g, &RunOptions::default(), &mut Vec::new(), &mut |_, _| {});
        assert!(matches!(err, Err(HarnessError::UnknownMap(_))));
    }

    struct FailingSink(usize);

    impl RecordSink for FailingSink {
        fn append(&mut self, _: &RunRecord) -> std::io::Result<()> {
            if self.0 == 0 {
                return Err(std::io::Error::other("disk full"));
            }
            self.0 -= 1;
            Ok(())
        }
    }

    #[test]
    fn sink_failure_aborts() {
        let err = run_grid(
            &tiny(),
            &RunOptions::default(),
            &mut FailingSink(1),
            &mut |_, _| {},
        );
        assert!(matches!(err, Err(HarnessError::Sink(_))));
    }
}
