//! Real-coded genetic algorithm over movement-map genotypes.
//!
//! Generational replacement with elitism, tournament selection, cut-point or
//! uniform crossover and uniform-reset mutation. Fitness is minimized.
//!
//! One-point crossover is the default. Genes are laid out UAV-major in
//! row-major cell order, so a cut keeps contiguous map regions of each
//! parent's movement maps together; uniform crossover scatters them and
//! rarely preserves a walk.
//!
//! All random draws come from one ChaCha stream per run and are consumed in a
//! fixed order, so a run is a pure function of its configuration. Fitness
//! evaluation is parallel but order-independent.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{CodecError, Genotype};
use crate::gridmap::GridMap;
use crate::sim::{Scenario, SimError, SimResult};

/// RNG used by every GA run.
pub type GaRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("invalid GA configuration: {0}")]
    Config(String),
    #[error("empty population")]
    EmptyPopulation,
    #[error("parents have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// How a selected parent pair is recombined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CrossoverKind {
    /// Every gene position swaps independently with probability 0.5.
    Uniform,
    /// Genes after one random cut point are swapped.
    #[default]
    OnePoint,
    /// Genes between two random cut points are swapped.
    TwoPoint,
}

/// Lower limit of the default per-gene mutation rate.
pub const MUTATION_FLOOR: f64 = 0.025;

/// GA hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Probability that a selected parent pair is recombined.
    pub crossover_rate: f64,
    pub crossover: CrossoverKind,
    /// Per-gene reset probability; `None` means `max(0.025, 1 / L)`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub elitism: usize,
    pub seed: u64,
    /// Stop as soon as the best fitness reaches the theoretical minimum.
    pub early_stop_at_lower_bound: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 1000,
            generations: 100,
            crossover_rate: 0.9,
            crossover: CrossoverKind::OnePoint,
            mutation_rate: None,
            tournament_size: 3,
            elitism: 1,
            seed: 0,
            early_stop_at_lower_bound: true,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let fail = |m: String| Err(GaError::Config(m));
        if self.population_size < 2 {
            return fail(format!("population_size {} < 2", self.population_size));
        }
        if self.generations < 1 {
            return fail("generations must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return fail(format!(
                "crossover_rate {} outside [0, 1]",
                self.crossover_rate
            ));
        }
        if let Some(m) = self.mutation_rate {
            if !(0.0..=1.0).contains(&m) {
                return fail(format!("mutation_rate {m} outside [0, 1]"));
            }
        }
        if self.tournament_size < 1 || self.tournament_size > self.population_size {
            return fail(format!(
                "tournament_size {} outside 1..={}",
                self.tournament_size, self.population_size
            ));
        }
        if self.elitism >= self.population_size {
            return fail(format!(
                "elitism {} must be below population_size {}",
                self.elitism, self.population_size
            ));
        }
        Ok(())
    }

    /// The per-gene mutation rate actually used for genotypes of length `len`.
    pub fn effective_mutation_rate(&self, len: usize) -> f64 {
        self.mutation_rate
            .unwrap_or_else(|| (1.0 / len.max(1) as f64).max(MUTATION_FLOOR))
    }
}

/// Outcome of one GA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaRunResult {
    pub best_genotype: Genotype,
    pub best_fitness: u32,
    pub best_sim: SimResult,
    pub generations_executed: usize,
    /// Best fitness seen so far, after each generation.
    pub fitness_history: Vec<u32>,
    pub evaluations: u64,
    pub wall_time: f64,
}

/// `size` genotypes with genes drawn uniformly from `[0, 1]`.
pub fn init_population(
    rng: &mut impl Rng,
    map: &GridMap,
    uavs: usize,
    size: usize,
) -> Vec<Genotype> {
    let len = uavs * map.visitable_count();
    (0..size).map(|_| random_genotype(rng, len)).collect()
}

fn random_genotype(rng: &mut impl Rng, len: usize) -> Genotype {
    Genotype::from_valid((0..len).map(|_| rng.gen_range(0.0..=1.0)).collect())
}

/// Index of the fittest among `candidates`; ties go to the lowest index.
pub fn tournament_winner(candidates: &[usize], fitnesses: &[u32]) -> usize {
    *candidates
        .iter()
        .min_by_key(|&&i| (fitnesses[i], i))
        .expect("non-empty tournament")
}

/// Samples `k` indices with replacement and returns the fittest.
pub fn tournament_select(
    rng: &mut impl Rng,
    fitnesses: &[u32],
    k: usize,
) -> Result<usize, GaError> {
    if fitnesses.is_empty() {
        return Err(GaError::EmptyPopulation);
    }
    let mut best = rng.gen_range(0..fitnesses.len());
    for _ in 1..k.max(1) {
        let c = rng.gen_range(0..fitnesses.len());
        if (fitnesses[c], c) < (fitnesses[best], best) {
            best = c;
        }
    }
    Ok(best)
}

/// Uniform crossover applied with probability `rate`.
pub fn crossover(
    rng: &mut impl Rng,
    a: &Genotype,
    b: &Genotype,
    rate: f64,
) -> Result<(Genotype, Genotype), GaError> {
    crossover_with(rng, CrossoverKind::Uniform, a, b, rate)
}

/// Crossover of the given kind, applied with probability `rate`; otherwise
/// the children are copies of the parents.
pub fn crossover_with(
    rng: &mut impl Rng,
    kind: CrossoverKind,
    a: &Genotype,
    b: &Genotype,
    rate: f64,
) -> Result<(Genotype, Genotype), GaError> {
    if a.len() != b.len() {
        return Err(GaError::LengthMismatch(a.len(), b.len()));
    }
    let mut x = a.genes().to_vec();
    let mut y = b.genes().to_vec();
    let n = x.len();
    if rng.gen_bool(rate) {
        match kind {
            CrossoverKind::Uniform => {
                for i in 0..n {
                    if rng.gen_bool(0.5) {
                        std::mem::swap(&mut x[i], &mut y[i]);
                    }
                }
            }
            CrossoverKind::OnePoint => {
                let cut = rng.gen_range(0..=n);
                x[cut..].swap_with_slice(&mut y[cut..]);
            }
            CrossoverKind::TwoPoint => {
                let (p, q) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
                let (lo, hi) = (p.min(q), p.max(q));
                x[lo..hi].swap_with_slice(&mut y[lo..hi]);
            }
        }
    }
    Ok((Genotype::from_valid(x), Genotype::from_valid(y)))
}

/// Resets each gene to a fresh uniform draw with probability `rate`.
pub fn mutate(rng: &mut impl Rng, g: Genotype, rate: f64) -> Genotype {
    let mut genes = g.into_genes();
    for gene in &mut genes {
        if rng.gen_bool(rate) {
            *gene = rng.gen_range(0.0..=1.0);
        }
    }
    Genotype::from_valid(genes)
}

/// Runs the GA on `map` with `uavs` UAVs.
pub fn run_ga(config: &GaConfig, map: &GridMap, uavs: usize) -> Result<GaRunResult, GaError> {
    config.validate()?;
    let scenario = Scenario::new(map, uavs)?;
    run_ga_on(config, &scenario)
}

/// Like [`run_ga`] with a prebuilt scenario.
pub fn run_ga_on(config: &GaConfig, scenario: &Scenario) -> Result<GaRunResult, GaError> {
    config.validate()?;
    let started = Instant::now();
    let mut rng = GaRng::seed_from_u64(config.seed);
    let len = scenario.genotype_len();
    let mutation_rate = config.effective_mutation_rate(len);
    let bound = scenario.min_epochs();

    let mut population = init_population(
        &mut rng,
        scenario.map(),
        scenario.uavs(),
        config.population_size,
    );
    let mut best: Option<(u32, Genotype)> = None;
    let mut history = Vec::with_capacity(config.generations);
    let mut evaluations = 0u64;

    for generation in 1..=config.generations {
        let fitnesses: Vec<u32> = population.par_iter().map(|g| scenario.fitness(g)).collect();
        evaluations += fitnesses.len() as u64;

        let order = ranking(&fitnesses);
        let leader = order[0];
        if best.as_ref().is_none_or(|(f, _)| fitnesses[leader] < *f) {
            best = Some((fitnesses[leader], population[leader].clone()));
        }
        let best_fitness = best.as_ref().map(|(f, _)| *f).expect("evaluated");
        history.push(best_fitness);

        let done = generation == config.generations
            || (config.early_stop_at_lower_bound && best_fitness <= bound);
        if done {
            break;
        }

        let mut next: Vec<Genotype> = order[..config.elitism]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population_size {
            let pa = tournament_select(&mut rng, &fitnesses, config.tournament_size)?;
            let pb = tournament_select(&mut rng, &fitnesses, config.tournament_size)?;
            let (ca, cb) = crossover_with(
                &mut rng,
                config.crossover,
                &population[pa],
                &population[pb],
                config.crossover_rate,
            )?;
            next.push(mutate(&mut rng, ca, mutation_rate));
            if next.len() < config.population_size {
                next.push(mutate(&mut rng, cb, mutation_rate));
            }
        }
        population = next;
    }

    let (best_fitness, best_genotype) = best.expect("at least one generation");
    let best_sim = scenario.evaluate(&best_genotype)?;
    debug_assert_eq!(best_sim.fitness, best_fitness);
    Ok(GaRunResult {
        best_genotype,
        best_fitness,
        best_sim,
        generations_executed: history.len(),
        fitness_history: history,
        evaluations,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// Indices sorted by (fitness, index).
fn ranking(fitnesses: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by_key(|&i| (fitnesses[i], i));
    order
}

impl From<CodecError> for GaError {
    fn from(e: CodecError) -> Self {
        GaError::Sim(SimError::Codec(e))
    }
}
