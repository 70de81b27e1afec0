//! Epoch-synchronized swarm simulation and the coverage fitness.
//!
//! Every UAV starts on its corner and follows its own movement map. In each
//! epoch the UAVs act in index order; a UAV moves only if its map gives a
//! direction at its current cell, the target is not in its own visited set,
//! and no other UAV currently occupies the target (moves made earlier in the
//! same epoch count). The run ends when the swarm has visited every free cell,
//! when an epoch passes with no movement, or when the epoch budget runs out.
//!
//! Fitness is the completing epoch on success, and the epoch budget plus the
//! number of unvisited cells otherwise. Lower is better.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{self, CodecError, Genotype, MovementMap};
use crate::gridmap::{Coord, Direction, GridMap, MapError, Topology, MAX_UAVS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Outcome of one simulated genotype.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimResult {
    pub fitness: u32,
    pub covered: bool,
    /// Number of epochs in which at least one UAV moved. Equals `fitness`
    /// when `covered`.
    pub epochs_used: u32,
    pub unvisited: usize,
    /// Cells occupied by each UAV at epoch 0 (start), 1, 2, ...
    pub paths: Vec<Vec<Coord>>,
}

/// One move in a UAV path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub epoch: u32,
    pub from: Coord,
    pub to: Coord,
    pub direction: Direction,
}

/// A (map, swarm size) pair with everything the simulator needs precomputed.
///
/// Cheap to share between threads; evaluation takes `&self`.
#[derive(Debug, Clone)]
pub struct Scenario {
    map: GridMap,
    topo: Topology,
    uavs: usize,
    starts: Vec<usize>,
    min_epochs: u32,
    max_epochs: u32,
}

trait Trace {
    fn record(&mut self, positions: &[usize]);
}

struct NoTrace;

impl Trace for NoTrace {
    #[inline]
    fn record(&mut self, _: &[usize]) {}
}

struct PathTrace(Vec<Vec<usize>>);

impl Trace for PathTrace {
    fn record(&mut self, positions: &[usize]) {
        for (path, &p) in self.0.iter_mut().zip(positions) {
            path.push(p);
        }
    }
}

struct Outcome {
    fitness: u32,
    covered: bool,
    epochs_used: u32,
    unvisited: usize,
}

impl Scenario {
    pub fn new(map: &GridMap, uavs: usize) -> Result<Self, SimError> {
        let topo = map.topology();
        let starts = map
            .start_positions(uavs)?
            .into_iter()
            .map(|c| topo.index_of(c).expect("corners are free"))
            .collect();
        Ok(Self {
            map: map.clone(),
            topo,
            uavs,
            starts,
            min_epochs: map.theoretical_min_epochs(uavs)?,
            max_epochs: map.max_epochs(uavs)?,
        })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn uavs(&self) -> usize {
        self.uavs
    }

    pub fn genotype_len(&self) -> usize {
        self.uavs * self.topo.len()
    }

    pub fn min_epochs(&self) -> u32 {
        self.min_epochs
    }

    pub fn max_epochs(&self) -> u32 {
        self.max_epochs
    }

    pub fn check_len(&self, genotype: &Genotype) -> Result<(), SimError> {
        if genotype.len() != self.genotype_len() {
            return Err(CodecError::LengthMismatch {
                expected: self.genotype_len(),
                found: genotype.len(),
            }
            .into());
        }
        Ok(())
    }

    /// Fitness only, without recording paths. The GA's hot path.
    ///
    /// # Panics
    ///
    /// If `genotype` has the wrong length for this scenario.
    pub fn fitness(&self, genotype: &Genotype) -> u32 {
        assert_eq!(genotype.len(), self.genotype_len(), "genotype length");
        self.run(genotype.genes(), &mut NoTrace).fitness
    }

    /// Full simulation including per-UAV paths.
    pub fn evaluate(&self, genotype: &Genotype) -> Result<SimResult, SimError> {
        self.check_len(genotype)?;
        let mut trace = PathTrace(vec![Vec::new(); self.uavs]);
        let out = self.run(genotype.genes(), &mut trace);
        let paths = trace
            .0
            .into_iter()
            .map(|p| p.into_iter().map(|i| self.topo.coord(i)).collect())
            .collect();
        Ok(SimResult {
            fitness: out.fitness,
            covered: out.covered,
            epochs_used: out.epochs_used,
            unvisited: out.unvisited,
            paths,
        })
    }

    pub fn movement_maps(&self, genotype: &Genotype) -> Result<Vec<MovementMap>, SimError> {
        Ok(codec::decode_with(genotype, &self.topo, self.uavs)?)
    }

    fn run<T: Trace>(&self, genes: &[f64], trace: &mut T) -> Outcome {
        let v = self.topo.len();
        let n = self.uavs;
        let mut own = vec![false; n * v];
        let mut global = vec![false; v];
        let mut seen = 0usize;
        let mut pos = [usize::MAX; MAX_UAVS];

        for (u, &s) in self.starts.iter().enumerate() {
            pos[u] = s;
            own[u * v + s] = true;
            if !global[s] {
                global[s] = true;
                seen += 1;
            }
        }
        trace.record(&pos[..n]);
        if seen == v {
            return Outcome {
                fitness: 0,
                covered: true,
                epochs_used: 0,
                unvisited: 0,
            };
        }

        let mut epochs_used = 0;
        for epoch in 1..=self.max_epochs {
            let mut moved = false;
            for u in 0..n {
                let cell = pos[u];
                let options = self.topo.moves(cell);
                if options.is_empty() {
                    continue;
                }
                let (_, target) = options[codec::interval(genes[u * v + cell], options.len())];
                if own[u * v + target] || pos[..n].contains(&target) {
                    continue;
                }
                pos[u] = target;
                own[u * v + target] = true;
                if !global[target] {
                    global[target] = true;
                    seen += 1;
                }
                moved = true;
            }
            if !moved {
                break;
            }
            epochs_used = epoch;
            trace.record(&pos[..n]);
            if seen == v {
                return Outcome {
                    fitness: epoch,
                    covered: true,
                    epochs_used,
                    unvisited: 0,
                };
            }
        }
        Outcome {
            fitness: self.max_epochs + (v - seen) as u32,
            covered: false,
            epochs_used,
            unvisited: v - seen,
        }
    }
}

/// Simulates `genotype` on `map` with `uavs` UAVs.
pub fn evaluate(genotype: &Genotype, map: &GridMap, uavs: usize) -> Result<SimResult, SimError> {
    Scenario::new(map, uavs)?.evaluate(genotype)
}

/// Per-UAV move lists, skipping epochs in which the UAV stayed put.
pub fn extract_paths(result: &SimResult) -> Vec<Vec<Step>> {
    result
        .paths
        .iter()
        .map(|path| {
            path.windows(2)
                .enumerate()
                .filter(|(_, w)| w[0] != w[1])
                .map(|(i, w)| Step {
                    epoch: i as u32 + 1,
                    from: w[0],
                    to: w[1],
                    direction: Direction::between(w[0], w[1])
                        .expect("consecutive path cells are adjacent"),
                })
                .collect()
        })
        .collect()
}

/// Fraction of the visitable cells the swarm visited.
pub fn coverage_ratio(result: &SimResult, map: &GridMap) -> f64 {
    let v = map.visitable_count();
    (v - result.unvisited) as f64 / v as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrajectoryError {
    #[error("expected {expected} UAV paths, found {found}")]
    UavCount { expected: usize, found: usize },
    #[error("UAV {uav} path is empty")]
    EmptyPath { uav: usize },
    #[error("UAV paths have different lengths")]
    RaggedPaths,
    #[error("UAV {uav} starts at {found}, expected {expected}")]
    WrongStart {
        uav: usize,
        expected: Coord,
        found: Coord,
    },
    #[error("UAV {uav} epoch {epoch}: {cell} is not a visitable cell")]
    NotVisitable {
        uav: usize,
        epoch: usize,
        cell: Coord,
    },
    #[error("UAV {uav} epoch {epoch}: {from} -> {to} is not a 4-adjacent step")]
    IllegalStep {
        uav: usize,
        epoch: usize,
        from: Coord,
        to: Coord,
    },
    #[error("UAV {uav} epoch {epoch}: re-entered its own visited cell {cell}")]
    Revisit {
        uav: usize,
        epoch: usize,
        cell: Coord,
    },
    #[error("epoch {epoch}: UAVs {a} and {b} share cell {cell}")]
    Collision {
        epoch: usize,
        a: usize,
        b: usize,
        cell: Coord,
    },
}

/// Summary of a replayed trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    /// Distinct cells visited by the whole swarm.
    pub covered_cells: usize,
    /// Sum over UAVs of the distinct cells each one visited.
    pub per_uav_cells: usize,
    /// Whether every visitable cell was visited.
    pub complete: bool,
}

/// Replays per-UAV paths and checks they form a legal swarm trajectory:
/// correct starts, 4-adjacent steps between free cells, no UAV re-entering
/// its own visited cells, and no two UAVs sharing a cell at any epoch.
pub fn replay(map: &GridMap, paths: &[Vec<Coord>]) -> Result<Replay, TrajectoryError> {
    let starts =
        map.start_positions(paths.len().max(1))
            .map_err(|_| TrajectoryError::UavCount {
                expected: 1,
                found: paths.len(),
            })?;
    if paths.is_empty() {
        return Err(TrajectoryError::UavCount {
            expected: 1,
            found: 0,
        });
    }
    let len = paths[0].len();
    for (uav, p) in paths.iter().enumerate() {
        if p.is_empty() {
            return Err(TrajectoryError::EmptyPath { uav });
        }
        if p.len() != len {
            return Err(TrajectoryError::RaggedPaths);
        }
        if p[0] != starts[uav] {
            return Err(TrajectoryError::WrongStart {
                uav,
                expected: starts[uav],
                found: p[0],
            });
        }
    }
    let mut own: Vec<std::collections::HashSet<Coord>> = vec![Default::default(); paths.len()];
    for epoch in 0..len {
        for (uav, p) in paths.iter().enumerate() {
            let cell = p[epoch];
            if !map.is_visitable(cell) {
                return Err(TrajectoryError::NotVisitable { uav, epoch, cell });
            }
            if epoch > 0 && p[epoch - 1] != cell {
                let from = p[epoch - 1];
                if Direction::between(from, cell).is_none() {
                    return Err(TrajectoryError::IllegalStep {
                        uav,
                        epoch,
                        from,
                        to: cell,
                    });
                }
                if !own[uav].insert(cell) {
                    return Err(TrajectoryError::Revisit { uav, epoch, cell });
                }
            } else {
                own[uav].insert(cell);
            }
        }
        for a in 0..paths.len() {
            for b in a + 1..paths.len() {
                if paths[a][epoch] == paths[b][epoch] {
                    return Err(TrajectoryError::Collision {
                        epoch,
                        a,
                        b,
                        cell: paths[a][epoch],
                    });
                }
            }
        }
    }
    let union: std::collections::HashSet<Coord> = own.iter().flatten().copied().collect();
    Ok(Replay {
        covered_cells: union.len(),
        per_uav_cells: own.iter().map(|s| s.len()).sum(),
        complete: union.len() == map.visitable_count(),
    })
}
