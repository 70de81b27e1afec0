//! The `swarmcov` command line.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, invalid input files),
//! 2 runtime error, 3 `solve` finished without covering the map.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::evolve::{run_ga_on, CrossoverKind, GaConfig};
use crate::gridmap::{builtin_maps, GridMap, MAX_UAVS};
use crate::harness::{
    self, load_map, read_records, run_grid, ExperimentGrid, HarnessError, RecordWriter, RunOptions,
};
use crate::oracle::{self, MinEpochs, OracleBudget};
use crate::render::{ascii_titled, svg_diagram, Glyphs};
use crate::report::{render_json, render_text, TableId};
use crate::sim::{replay, Scenario};
use crate::solution::{ResultDocument, SolveConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_NOT_COVERED: i32 = 3;

/// Writes to stdout; a closed pipe (`swarmcov ... | head`) ends the process quietly.
fn emit(args: std::fmt::Arguments<'_>) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(EXIT_OK);
        }
        eprintln!("error: stdout: {e}");
        std::process::exit(EXIT_RUNTIME);
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

#[derive(Debug, Parser)]
#[command(
    name = "swarmcov",
    version,
    about = "Coverage path planning for UAV swarms with a genetic algorithm"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the GA once and write a result document.
    Solve(SolveArgs),
    /// Run an experiment grid, appending run records to a file.
    GridSearch(GridArgs),
    /// Print aggregation tables from a records file.
    Report(ReportArgs),
    /// Draw per-UAV path diagrams from a result document.
    Render(RenderArgs),
    /// List or show the built-in maps.
    Maps {
        #[command(subcommand)]
        action: MapsAction,
    },
    /// Check a map file and print its size and epoch bounds.
    Validate(ValidateArgs),
    /// Brute-force reference computations (slow; small maps only).
    #[command(hide = true)]
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Built-in map name (map1..map6) or map file path.
    #[arg(long)]
    pub map: String,
    /// Swarm size, 1 to 4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_UAVS as i64))]
    pub uavs: u8,
    /// GA settings file (TOML with GA configuration keys); flags override it.
    #[arg(long)]
    pub ga_config: Option<PathBuf>,
    /// Population size [default: 1000].
    #[arg(long)]
    pub pop: Option<usize>,
    /// Generation budget [default: 100].
    #[arg(long)]
    pub gens: Option<usize>,
    /// RNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Probability a parent pair is recombined [default: 0.9].
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    /// Recombination operator [default: one-point].
    #[arg(long, value_enum)]
    pub crossover: Option<CrossoverKind>,
    /// Per-gene reset probability [default: max(0.025, 1/L)].
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    /// Candidates per tournament [default: 3].
    #[arg(long)]
    pub tournament_size: Option<usize>,
    /// Best genotypes copied unchanged [default: 1].
    #[arg(long)]
    pub elitism: Option<usize>,
    /// Run every generation even after reaching the epoch lower bound.
    #[arg(long)]
    pub no_early_stop: bool,
    /// Where to write the result document.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    /// Experiment grid file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Records file; existing records are kept and their runs skipped.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "SWARMCOV_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Suppress progress output.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// Records file written by `grid-search`.
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long, value_enum, default_value_t = TableId::All)]
    #[serde(serialize_with = "ser_display")]
    pub table: TableId,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GlyphSet {
    Unicode,
    Ascii,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    /// Result document written by `solve`.
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
    pub format: RenderFormat,
    #[arg(long, value_enum, default_value_t = GlyphSet::Unicode)]
    pub glyphs: GlyphSet,
    /// Write one file per UAV here instead of printing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MapsAction {
    /// One line per map: size, free cells, obstacles, epoch bounds.
    List,
    /// Print a map's rows.
    Show { name: String },
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    /// Map file to check.
    pub path: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum OracleAction {
    /// Whether a single UAV can visit every cell exactly once from (0,0).
    Hamiltonian {
        #[arg(long)]
        map: String,
    },
    /// Exact minimum epochs over all joint movement maps.
    Exhaustive {
        #[arg(long)]
        map: String,
        #[arg(long)]
        uavs: usize,
    },
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Io(_) | HarnessError::Sink(_) | HarnessError::Ga(_) => {
                Failure::Runtime(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn echo(command: &str, config: &impl Serialize) {
    let json = serde_json::to_string(config).expect("config serializes");
    eprintln!("swarmcov {command} config: {json}");
}

/// Parses `std::env::args` and runs the command; returns the exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Runs the CLI on explicit arguments (the first is the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_RUNTIME
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Solve(a) => solve(a),
        Command::GridSearch(a) => grid_search(a),
        Command::Report(a) => report(a),
        Command::Render(a) => render(a),
        Command::Maps { action } => maps(action),
        Command::Validate(a) => validate(a),
        Command::Oracle { action } => oracle_cmd(action),
    }
}

fn resolve_ga(a: &SolveArgs) -> Result<GaConfig, Failure> {
    let mut ga = match &a.ga_config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => GaConfig::default(),
    };
    if let Some(v) = a.pop {
        ga.population_size = v;
    }
    if let Some(v) = a.gens {
        ga.generations = v;
    }
    if let Some(v) = a.seed {
        ga.seed = v;
    }
    if let Some(v) = a.crossover {
        ga.crossover = v;
    }
    if let Some(v) = a.crossover_rate {
        ga.crossover_rate = v;
    }
    if a.mutation_rate.is_some() {
        ga.mutation_rate = a.mutation_rate;
    }
    if let Some(v) = a.tournament_size {
        ga.tournament_size = v;
    }
    if let Some(v) = a.elitism {
        ga.elitism = v;
    }
    if a.no_early_stop {
        ga.early_stop_at_lower_bound = false;
    }
    ga.validate().map_err(usage)?;
    Ok(ga)
}

fn solve(a: SolveArgs) -> Result<i32, Failure> {
    let map = load_map(&a.map)?;
    let uavs = a.uavs as usize;
    let ga = resolve_ga(&a)?;
    let config = SolveConfig {
        map: a.map.clone(),
        uavs,
        ga,
    };
    echo("solve", &config);
    let scenario = Scenario::new(&map, uavs).map_err(usage)?;
    // Single-threaded: the worker pool belongs to grid-search.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(runtime)?;
    let run = pool
        .install(|| run_ga_on(&config.ga, &scenario))
        .map_err(runtime)?;
    let doc = ResultDocument::new(config, &scenario, &run).map_err(runtime)?;
    if let Some(out) = &a.out {
        fs::write(out, doc.to_json()).map_err(|e| runtime(format!("{}: {e}", out.display())))?;
    }
    eprintln!(
        "{} generations, {} evaluations, {:.2} s",
        run.generations_executed, run.evaluations, run.wall_time
    );
    if doc.covered {
        outln!(
            "covered in {} epochs (bound {})",
            doc.epochs_used,
            doc.bound
        );
        Ok(EXIT_OK)
    } else {
        outln!(
            "not covered: fitness {} = {} (max epochs) + {} unvisited cells (bound {})",
            doc.fitness,
            doc.max_epochs,
            doc.unvisited,
            doc.bound
        );
        Ok(EXIT_NOT_COVERED)
    }
}

/// Drops a trailing partial line left by an interrupted write, so the
/// surviving records can be read and resumed.
fn repair_tail(path: &Path) -> io::Result<()> {
    let bytes = fs::read(path)?;
    if bytes.is_empty() || bytes.ends_with(b"\n") {
        return Ok(());
    }
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    eprintln!(
        "warning: discarding {} bytes of an incomplete final record",
        bytes.len() - keep
    );
    OpenOptions::new()
        .write(true)
        .open(path)?
        .set_len(keep as u64)
}

fn grid_search(a: GridArgs) -> Result<i32, Failure> {
    let text =
        fs::read_to_string(&a.config).map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    let grid = ExperimentGrid::from_toml(&text)
        .map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    echo("grid-search", &a);
    eprintln!("grid:\n{}", grid.to_toml().trim_end());

    let mut skip = HashSet::new();
    let mut sink = if a.out.exists() && fs::metadata(&a.out).map_err(runtime)?.len() > 0 {
        repair_tail(&a.out).map_err(runtime)?;
        let file = fs::File::open(&a.out).map_err(runtime)?;
        let existing = match read_records(io::BufReader::new(file)) {
            Ok(r) => r,
            Err(HarnessError::EmptyRecords) => Vec::new(),
            Err(e) => return Err(usage(format!("{}: {e}", a.out.display()))),
        };
        skip.extend(existing.iter().map(|r| r.key()));
        let file = OpenOptions::new()
            .append(true)
            .open(&a.out)
            .map_err(runtime)?;
        RecordWriter::append_to(io::BufWriter::new(file))
    } else {
        let file =
            fs::File::create(&a.out).map_err(|e| runtime(format!("{}: {e}", a.out.display())))?;
        RecordWriter::create(io::BufWriter::new(file)).map_err(runtime)?
    };

    let quiet = a.quiet;
    let started = Instant::now();
    let mut last_pct = usize::MAX;
    let mut progress = |done: usize, todo: usize| {
        if quiet || todo == 0 {
            return;
        }
        let pct = done * 100 / todo;
        if pct != last_pct || done == todo {
            last_pct = pct;
            eprint!(
                "\r{done}/{todo} runs ({pct}%), {:.0} s",
                started.elapsed().as_secs_f64()
            );
            if done == todo {
                eprintln!();
            }
        }
    };
    let options = RunOptions {
        workers: a.workers,
        skip,
    };
    let summary = run_grid(&grid, &options, &mut sink, &mut progress)?;
    eprintln!(
        "{} runs in grid, {} already recorded, {} executed",
        summary.total, summary.skipped, summary.executed
    );
    Ok(EXIT_OK)
}

fn report(a: ReportArgs) -> Result<i32, Failure> {
    echo("report", &a);
    let records = harness::read_records_file(&a.records)?;
    if a.json {
        let v = render_json(&records, a.table)?;
        outln!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        out!("{}", render_text(&records, a.table)?);
    }
    Ok(EXIT_OK)
}

fn render(a: RenderArgs) -> Result<i32, Failure> {
    echo("render", &a);
    let text =
        fs::read_to_string(&a.result).map_err(|e| usage(format!("{}: {e}", a.result.display())))?;
    let doc = ResultDocument::from_json(&text).map_err(usage)?;
    if doc.paths.is_empty() {
        return Err(usage("result has no paths"));
    }
    let map = doc.map().map_err(usage)?;
    let check = replay(&map, &doc.paths).map_err(|e| usage(format!("paths do not replay: {e}")))?;
    if doc.covered && !check.complete {
        return Err(usage(
            "result claims coverage but its paths do not cover the map",
        ));
    }
    let glyphs = match a.glyphs {
        GlyphSet::Unicode => Glyphs::Unicode,
        GlyphSet::Ascii => Glyphs::Ascii,
    };
    let outputs: Vec<(String, String)> = match a.format {
        RenderFormat::Ascii => doc
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (
                    format!("uav{}.txt", i + 1),
                    ascii_titled(&map, p, i, glyphs),
                )
            })
            .collect(),
        RenderFormat::Svg => doc
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("uav{}.svg", i + 1), svg_diagram(&map, p, i)))
            .collect(),
    };
    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(runtime)?;
            for (name, body) in outputs {
                let path = dir.join(name);
                fs::write(&path, body).map_err(runtime)?;
                outln!("{}", path.display());
            }
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for (i, (_, body)) in outputs.iter().enumerate() {
                if i > 0 && a.format == RenderFormat::Ascii {
                    out.write_all(b"\n").map_err(runtime)?;
                }
                out.write_all(body.as_bytes()).map_err(runtime)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn bounds(map: &GridMap) -> String {
    (1..=MAX_UAVS)
        .map(|n| {
            map.theoretical_min_epochs(n)
                .map_or("-".to_string(), |b| b.to_string())
        })
        .collect::<Vec<_>>()
        .join("/")
}

fn describe(map: &GridMap) -> String {
    format!(
        "{:<6}{}x{}  V={}  obstacles={}  bounds {}",
        map.id(),
        map.rows(),
        map.cols(),
        map.visitable_count(),
        map.obstacle_count(),
        bounds(map)
    )
}

fn maps(action: MapsAction) -> Result<i32, Failure> {
    match action {
        MapsAction::List => {
            echo("maps list", &serde_json::json!({}));
            for m in builtin_maps() {
                outln!("{}", describe(&m));
            }
        }
        MapsAction::Show { name } => {
            echo("maps show", &name);
            let m = crate::gridmap::builtin(&name)
                .ok_or_else(|| usage(format!("unknown built-in map {name:?} (try map1..map6)")))?;
            for line in m.to_text().lines().skip(1) {
                outln!("{line}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn validate(a: ValidateArgs) -> Result<i32, Failure> {
    echo("validate", &a);
    let text =
        fs::read_to_string(&a.path).map_err(|e| runtime(format!("{}: {e}", a.path.display())))?;
    let id = a.path.file_stem().and_then(|s| s.to_str()).unwrap_or("map");
    let map = GridMap::parse(id, &text).map_err(|e| usage(format!("{}: {e}", a.path.display())))?;
    outln!("ok: {}", describe(&map));
    Ok(EXIT_OK)
}

fn oracle_cmd(action: OracleAction) -> Result<i32, Failure> {
    let budget = OracleBudget::default();
    match action {
        OracleAction::Hamiltonian { map } => {
            echo("oracle hamiltonian", &map);
            let m = load_map(&map)?;
            let start = crate::gridmap::Coord::new(0, 0);
            let found = oracle::hamiltonian_path_exists(&m, start, budget).map_err(runtime)?;
            outln!("{}: hamiltonian path from {start}: {found}", m.id());
        }
        OracleAction::Exhaustive { map, uavs } => {
            echo("oracle exhaustive", &(&map, uavs));
            let m = load_map(&map)?;
            match oracle::exhaustive_min_epochs(&m, uavs, budget).map_err(runtime)? {
                MinEpochs::Epochs(e) => outln!("{}: minimum {e} epochs with {uavs} UAVs", m.id()),
                MinEpochs::Infeasible => outln!("{}: not coverable with {uavs} UAVs", m.id()),
            }
        }
    }
    Ok(EXIT_OK)
}
