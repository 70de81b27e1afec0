//! Grid-search experiments over maps, swarm sizes and GA settings.
//!
//! A grid is the Cartesian product of maps, UAV counts, population sizes and
//! generation counts, with every cell repeated over independent seeded runs.
//! Each run produces one [`RunRecord`]. Records are appended to a versioned
//! line-delimited file and aggregated into summary tables afterwards.

mod aggregate;
mod grid;
mod records;

pub use aggregate::{
    aggregate_best_config, aggregate_max_success, aggregate_min_epochs, aggregate_success,
    aggregate_times, comparison_report, published_reference, BestConfig, ComparisonRow, ConfigKey,
    EpochStats, MapKey, PublishedPair, SuccessCell, TimeRange,
};
pub use grid::{
    load_map, run_grid, run_one, run_seed, ExperimentGrid, GaOperators, GridSummary, RunOptions,
    RunSpec,
};
pub use records::{
    read_records, read_records_file, RecordKey, RecordSink, RecordWriter, RunRecord,
    RECORDS_FORMAT, RECORDS_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment grid: {0}")]
    Grid(String),
    #[error("cannot resolve map {0:?} (not a built-in name or readable map file)")]
    UnknownMap(String),
    #[error("map file {path}: {source}")]
    MapFile {
        path: String,
        source: crate::gridmap::MapError,
    },
    #[error("no run records")]
    EmptyRecords,
    #[error("records line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error("record sink: {0}")]
    Sink(#[source] std::io::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Ga(#[from] crate::evolve::GaError),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
}
