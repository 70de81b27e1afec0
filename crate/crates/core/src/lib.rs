//! Coverage path planning for small UAV swarms on obstacle grids.
//!
//! Each UAV follows a fixed *movement map*: one direction per free cell,
//! decoded from a real-valued genotype. A genetic algorithm searches for the
//! joint movement maps that let the swarm visit every free cell in the fewest
//! synchronized epochs.
//!
//! - [`gridmap`]: maps, the map file format, built-in maps, epoch bounds.
//! - [`codec`]: genotype layout and gene decoding.
//! - [`sim`]: the epoch simulator and fitness.
//! - [`evolve`]: the genetic algorithm.
//! - [`harness`]: grid-search experiments, run records and aggregations.
//! - [`oracle`]: slow reference implementations for differential testing.
//! - [`render`]: ASCII and SVG path diagrams.
//! - [`cli`]: the `swarmcov` command line.

pub mod cli;
pub mod codec;
pub mod evolve;
pub mod gridmap;
pub mod harness;
pub mod oracle;
pub mod render;
pub mod report;
pub mod sim;
pub mod solution;

pub use codec::{build_movement_maps, decode_gene, genotype_length, Genotype, MovementMap};
pub use evolve::{run_ga, GaConfig, GaRunResult};
pub use gridmap::{builtin, builtin_maps, Coord, Direction, GridMap, MapError};
pub use sim::{evaluate, extract_paths, Scenario, SimResult};
