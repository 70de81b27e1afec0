//! Reference implementations used to check the fast paths.
//!
//! Everything here is written for obviousness rather than speed and shares no
//! code with [`crate::sim`] or [`crate::codec`] beyond the plain data types:
//! the fitness transliteration rebuilds neighbour lists from the raw grid and
//! keeps visited cells in flat lists, the exhaustive search enumerates whole
//! joint movement-map assignments, and the single-UAV feasibility check is a
//! plain backtracking Hamiltonian path search.

use std::collections::HashMap;

use thiserror::Error;

use crate::codec::Genotype;
use crate::gridmap::{Coord, Direction, GridMap};
use crate::sim::SimResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("UAV count {uavs} is invalid for a map with {visitable} visitable cells")]
    UavCount { uavs: usize, visitable: usize },
    #[error("start corners coincide")]
    StartsCoincide,
    #[error("genotype has {found} genes, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("start cell {0} is not visitable")]
    BadStart(Coord),
    #[error("{what} exceeds the oracle budget of {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },
}

/// Caps that keep the enumerations finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_joint_policies: u64,
    pub max_states: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_joint_policies: 5_000_000,
            max_states: 200_000_000,
        }
    }
}

/// Result of an exhaustive minimum-epoch search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinEpochs {
    Epochs(u32),
    Infeasible,
}

type Policy = HashMap<Coord, Option<Direction>>;

fn free_cells(map: &GridMap) -> Vec<Coord> {
    let mut cells = Vec::new();
    for row in 0..map.rows() {
        for col in 0..map.cols() {
            let c = Coord { row, col };
            if !map.is_blocked(c) {
                cells.push(c);
            }
        }
    }
    cells
}

fn neighbour(map: &GridMap, c: Coord, d: Direction) -> Option<Coord> {
    let (r, k) = (c.row as i64, c.col as i64);
    let (r, k) = match d {
        Direction::Up => (r - 1, k),
        Direction::Down => (r + 1, k),
        Direction::Left => (r, k - 1),
        Direction::Right => (r, k + 1),
    };
    if r < 0 || k < 0 || r >= map.rows() as i64 || k >= map.cols() as i64 {
        return None;
    }
    let n = Coord {
        row: r as usize,
        col: k as usize,
    };
    if map.is_blocked(n) {
        None
    } else {
        Some(n)
    }
}

fn options(map: &GridMap, c: Coord) -> Vec<Direction> {
    [
        Direction::Up,
        Direction::Down,
        Direction::Left,
        Direction::Right,
    ]
    .into_iter()
    .filter(|&d| neighbour(map, c, d).is_some())
    .collect()
}

fn corners(map: &GridMap, uavs: usize) -> Result<Vec<Coord>, OracleError> {
    let v = free_cells(map).len();
    if uavs == 0 || uavs > 4 || uavs > v {
        return Err(OracleError::UavCount { uavs, visitable: v });
    }
    let all = [
        Coord { row: 0, col: 0 },
        Coord {
            row: map.rows() - 1,
            col: 0,
        },
        Coord {
            row: 0,
            col: map.cols() - 1,
        },
        Coord {
            row: map.rows() - 1,
            col: map.cols() - 1,
        },
    ];
    let starts = all[..uavs].to_vec();
    for i in 0..uavs {
        for j in 0..i {
            if starts[i] == starts[j] {
                return Err(OracleError::StartsCoincide);
            }
        }
    }
    Ok(starts)
}

fn epoch_budget(v: usize, uavs: usize) -> u32 {
    // Smallest e with e * uavs >= v - uavs, doubled.
    let mut e = 0;
    while e * uavs < v - uavs {
        e += 1;
    }
    2 * e as u32
}

/// Straight transliteration of the fitness procedure.
pub fn reference_evaluate(
    genotype: &Genotype,
    map: &GridMap,
    uavs: usize,
) -> Result<SimResult, OracleError> {
    let cells = free_cells(map);
    let starts = corners(map, uavs)?;
    let v = cells.len();
    if genotype.len() != uavs * v {
        return Err(OracleError::LengthMismatch {
            expected: uavs * v,
            found: genotype.len(),
        });
    }
    let mut policies = Vec::new();
    for u in 0..uavs {
        let mut policy = Policy::new();
        for (i, &c) in cells.iter().enumerate() {
            let opts = options(map, c);
            let choice = if opts.is_empty() {
                None
            } else {
                let g = genotype.genes()[u * v + i];
                let mut j = (g * opts.len() as f64).floor() as usize;
                if j >= opts.len() {
                    j = opts.len() - 1;
                }
                Some(opts[j])
            };
            policy.insert(c, choice);
        }
        policies.push(policy);
    }
    Ok(simulate_policies(map, &starts, &policies))
}

fn simulate_policies(map: &GridMap, starts: &[Coord], policies: &[Policy]) -> SimResult {
    let total = free_cells(map);
    let max_epochs = epoch_budget(total.len(), starts.len());
    let mut positions: Vec<Coord> = starts.to_vec();
    let mut visited: Vec<Vec<Coord>> = starts.iter().map(|&s| vec![s]).collect();
    let mut paths: Vec<Vec<Coord>> = starts.iter().map(|&s| vec![s]).collect();

    let unvisited = |visited: &Vec<Vec<Coord>>| {
        total
            .iter()
            .filter(|c| !visited.iter().any(|vs| vs.contains(c)))
            .count()
    };

    if unvisited(&visited) == 0 {
        return SimResult {
            fitness: 0,
            covered: true,
            epochs_used: 0,
            unvisited: 0,
            paths,
        };
    }

    let mut epoch = 1;
    let mut last_moving_epoch = 0;
    while epoch <= max_epochs {
        let mut any_moved = false;
        for u in 0..positions.len() {
            let here = positions[u];
            let Some(dir) = policies[u][&here] else {
                continue;
            };
            let target = neighbour(map, here, dir).expect("policy moves stay on free cells");
            let self_visited = visited[u].contains(&target);
            let occupied = positions
                .iter()
                .enumerate()
                .any(|(w, &p)| w != u && p == target);
            if !self_visited && !occupied {
                positions[u] = target;
                visited[u].push(target);
                any_moved = true;
            }
        }
        if !any_moved {
            let left = unvisited(&visited);
            return SimResult {
                fitness: max_epochs + left as u32,
                covered: false,
                epochs_used: last_moving_epoch,
                unvisited: left,
                paths,
            };
        }
        last_moving_epoch = epoch;
        for u in 0..positions.len() {
            paths[u].push(positions[u]);
        }
        if unvisited(&visited) == 0 {
            return SimResult {
                fitness: epoch,
                covered: true,
                epochs_used: epoch,
                unvisited: 0,
                paths,
            };
        }
        epoch += 1;
    }
    let left = unvisited(&visited);
    SimResult {
        fitness: max_epochs + left as u32,
        covered: false,
        epochs_used: last_moving_epoch,
        unvisited: left,
        paths,
    }
}

/// Minimum covering fitness over every joint movement-map assignment.
///
/// The search space is the product over UAVs and cells of the number of
/// feasible moves; it must fit within `budget.max_joint_policies`.
pub fn exhaustive_min_epochs(
    map: &GridMap,
    uavs: usize,
    budget: OracleBudget,
) -> Result<MinEpochs, OracleError> {
    let cells = free_cells(map);
    let starts = corners(map, uavs)?;
    let per_cell: Vec<Vec<Direction>> = cells.iter().map(|&c| options(map, c)).collect();

    let mut space: u64 = 1;
    for _ in 0..uavs {
        for opts in &per_cell {
            space = space
                .checked_mul(opts.len().max(1) as u64)
                .filter(|&s| s <= budget.max_joint_policies)
                .ok_or(OracleError::BudgetExceeded {
                    what: "joint movement-map space",
                    limit: budget.max_joint_policies,
                })?;
        }
    }

    // Odometer over (uav, cell) choice digits.
    let slots: Vec<(usize, usize)> = (0..uavs)
        .flat_map(|u| (0..cells.len()).map(move |i| (u, i)))
        .collect();
    let mut digits = vec![0usize; slots.len()];
    let mut best: Option<u32> = None;
    loop {
        let mut policies = vec![Policy::new(); uavs];
        for (&(u, i), &d) in slots.iter().zip(&digits) {
            let opts = &per_cell[i];
            policies[u].insert(cells[i], opts.get(d).copied());
        }
        let result = simulate_policies(map, &starts, &policies);
        if result.covered {
            best = Some(best.map_or(result.fitness, |b| b.min(result.fitness)));
        }

        let mut k = 0;
        loop {
            if k == slots.len() {
                return Ok(best.map_or(MinEpochs::Infeasible, MinEpochs::Epochs));
            }
            let radix = per_cell[slots[k].1].len().max(1);
            digits[k] += 1;
            if digits[k] < radix {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Whether some path visits every visitable cell exactly once starting at
/// `start`, moving between 4-adjacent free cells.
///
/// Backtracking with two exact prunings: the unvisited cells must stay
/// connected to the path head, and at most one unvisited cell may have a
/// single remaining way in (it has to be the final cell).
pub fn hamiltonian_path_exists(
    map: &GridMap,
    start: Coord,
    budget: OracleBudget,
) -> Result<bool, OracleError> {
    if !map.contains(start) || map.is_blocked(start) {
        return Err(OracleError::BadStart(start));
    }
    let cells = free_cells(map);
    let id: HashMap<Coord, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let adj: Vec<Vec<usize>> = cells
        .iter()
        .map(|&c| {
            options(map, c)
                .into_iter()
                .map(|d| id[&neighbour(map, c, d).unwrap()])
                .collect()
        })
        .collect();

    let mut search = HamSearch {
        adj: &adj,
        visited: vec![false; cells.len()],
        remaining: cells.len() - 1,
        states: 0,
        limit: budget.max_states,
    };
    let s = id[&start];
    search.visited[s] = true;
    search.extend(s)
}

struct HamSearch<'a> {
    adj: &'a [Vec<usize>],
    visited: Vec<bool>,
    remaining: usize,
    states: u64,
    limit: u64,
}

impl HamSearch<'_> {
    fn extend(&mut self, head: usize) -> Result<bool, OracleError> {
        self.states += 1;
        if self.states > self.limit {
            return Err(OracleError::BudgetExceeded {
                what: "Hamiltonian path search states",
                limit: self.limit,
            });
        }
        if self.remaining == 0 {
            return Ok(true);
        }
        if !self.viable(head) {
            return Ok(false);
        }
        for k in 0..self.adj[head].len() {
            let next = self.adj[head][k];
            if self.visited[next] {
                continue;
            }
            self.visited[next] = true;
            self.remaining -= 1;
            let found = self.extend(next)?;
            self.visited[next] = false;
            self.remaining += 1;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn viable(&self, head: usize) -> bool {
        let mut dead_ends = 0;
        for cell in 0..self.adj.len() {
            if self.visited[cell] {
                continue;
            }
            let ways_in = self.adj[cell]
                .iter()
                .filter(|&&n| !self.visited[n] || n == head)
                .count();
            if ways_in == 0 {
                return false;
            }
            if ways_in == 1 {
                dead_ends += 1;
                if dead_ends > 1 {
                    return false;
                }
            }
        }
        // Every unvisited cell must be reachable from the head through
        // unvisited cells.
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![head];
        seen[head] = true;
        let mut reached = 0;
        while let Some(c) = stack.pop() {
            for &n in &self.adj[c] {
                if !self.visited[n] && !seen[n] {
                    seen[n] = true;
                    reached += 1;
                    stack.push(n);
                }
            }
        }
        reached == self.remaining
    }
}
