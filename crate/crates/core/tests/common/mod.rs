//! Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use swarmcov::harness::RunRecord;
use swarmcov::sim::{replay, Scenario};
use swarmcov::{Genotype, SimResult};

/// Checks every simulator invariant for one evaluated genotype; returns a
/// description of the first violation.
pub fn check_invariants(scenario: &Scenario, g: &Genotype, r: &SimResult) -> Result<(), String> {
    let map = scenario.map();
    let v = map.visitable_count();
    let rep = replay(map, &r.paths).map_err(|e| format!("illegal trajectory: {e}"))?;
    if rep.complete != r.covered {
        return Err(format!(
            "replay complete={} but covered={}",
            rep.complete, r.covered
        ));
    }
    if rep.covered_cells != v - r.unvisited {
        return Err(format!(
            "replay covers {} cells, result says {} unvisited of {v}",
            rep.covered_cells, r.unvisited
        ));
    }
    if r.paths
        .iter()
        .any(|p| p.len() != r.epochs_used as usize + 1)
    {
        return Err("path length differs from epochs_used + 1".into());
    }
    let max = scenario.max_epochs();
    if r.covered {
        if r.unvisited != 0 || r.fitness != r.epochs_used || r.fitness > max {
            return Err(format!("bad covered result {r:?}"));
        }
        if r.fitness < scenario.min_epochs() {
            return Err(format!(
                "fitness {} below bound {}",
                r.fitness,
                scenario.min_epochs()
            ));
        }
    } else if r.unvisited == 0 || r.fitness != max + r.unvisited as u32 {
        return Err(format!(
            "bad penalty: fitness {} max {max} unvisited {}",
            r.fitness, r.unvisited
        ));
    }
    let again = scenario.evaluate(g).map_err(|e| e.to_string())?;
    if &again != r {
        return Err("evaluation is not deterministic".into());
    }
    if scenario.fitness(g) != r.fitness {
        return Err("fast fitness path disagrees with evaluate".into());
    }
    Ok(())
}

fn record(
    map: &str,
    uavs: usize,
    pop: usize,
    gens: usize,
    run: usize,
    epochs: Option<u32>,
    time: f64,
) -> RunRecord {
    RunRecord {
        map_id: map.into(),
        uavs,
        population_size: pop,
        generations: gens,
        run_index: run,
        seed: run as u64,
        covered: epochs.is_some(),
        best_fitness: epochs.unwrap_or(500),
        best_epochs: epochs,
        wall_time_seconds: time,
        generations_executed: gens,
        genotype: Vec::new(),
        paths: Vec::new(),
    }
}

/// A 200-record synthetic grid with hand-computable aggregates:
///
/// | cell                 | runs | covered | epochs         | covered times  |
/// |----------------------|------|---------|----------------|----------------|
/// | map1/1, 1000 x 100   | 50   | 17      | 48             | 10..=26 s      |
/// | map1/1, 2000 x 100   | 50   | 39      | 48             | 20..=58 s      |
/// | map3/2, 2000 x 100   | 25   | 5       | 13             | 3.5..=5.5 s    |
/// | map3/2, 2000 x 200   | 25   | 25      | 13             | 5.0..=11.0 s   |
/// | map6/3, 5000 x 500   | 50   | 0       | none           | none           |
///
/// Records are interleaved so no aggregate can rely on input order.
pub fn synthetic_records() -> Vec<RunRecord> {
    let mut out = Vec::new();
    for i in 0..50 {
        out.push(record(
            "map1",
            1,
            1000,
            100,
            i,
            (i < 17).then_some(48),
            10.0 + i as f64,
        ));
        out.push(record(
            "map1",
            1,
            2000,
            100,
            i,
            (i < 39).then_some(48),
            20.0 + i as f64,
        ));
        out.push(record("map6", 3, 5000, 500, i, None, 100.0 + i as f64));
    }
    for i in 0..25 {
        out.push(record(
            "map3",
            2,
            2000,
            100,
            i,
            (i < 5).then_some(13),
            3.5 + 0.5 * i as f64,
        ));
        out.push(record(
            "map3",
            2,
            2000,
            200,
            i,
            Some(13),
            5.0 + 0.25 * i as f64,
        ));
    }
    // Deterministic shuffle: reverse, then rotate, so cells are interleaved
    // differently from construction order.
    out.reverse();
    out.rotate_left(77);
    out
}
