//! C ABI over the swarmcov planner.
//!
//! Maps and results are opaque heap handles owned by the caller and released
//! with their `_free` function. Fallible calls return a [`SwarmcovStatus`]
//! and write their output through a pointer argument; on failure a message is
//! available from [`swarmcov_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use swarmcov::evolve::{run_ga, CrossoverKind};
use swarmcov::{builtin, evaluate, GaConfig, Genotype, GridMap, SimResult};

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmcovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidMap = 3,
    InvalidArgument = 4,
    OutOfRange = 5,
    Internal = 6,
}

/// Opaque grid map handle.
pub struct SwarmcovMap {
    map: GridMap,
}

/// Opaque simulation or solve result handle.
pub struct SwarmcovResult {
    sim: SimResult,
    genotype: Vec<f64>,
}

/// Recombination operator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmcovCrossover {
    Uniform = 0,
    OnePoint = 1,
    TwoPoint = 2,
}

impl From<SwarmcovCrossover> for CrossoverKind {
    fn from(c: SwarmcovCrossover) -> Self {
        match c {
            SwarmcovCrossover::Uniform => CrossoverKind::Uniform,
            SwarmcovCrossover::OnePoint => CrossoverKind::OnePoint,
            SwarmcovCrossover::TwoPoint => CrossoverKind::TwoPoint,
        }
    }
}

impl From<CrossoverKind> for SwarmcovCrossover {
    fn from(c: CrossoverKind) -> Self {
        match c {
            CrossoverKind::Uniform => SwarmcovCrossover::Uniform,
            CrossoverKind::OnePoint => SwarmcovCrossover::OnePoint,
            CrossoverKind::TwoPoint => SwarmcovCrossover::TwoPoint,
        }
    }
}

/// GA settings. A negative `mutation_rate` selects the default
/// `max(0.025, 1 / genotype length)`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SwarmcovGaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub crossover: SwarmcovCrossover,
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub elitism: usize,
    pub seed: u64,
    pub early_stop: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn fail(status: SwarmcovStatus, msg: impl Into<String>) -> SwarmcovStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting a panic into `SWARMCOV_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> SwarmcovStatus) -> SwarmcovStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == SwarmcovStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(SwarmcovStatus::Internal, "internal error (panic)"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, SwarmcovStatus> {
    if p.is_null() {
        return Err(fail(SwarmcovStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SwarmcovStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn put<T>(out: *mut T, value: T) -> SwarmcovStatus {
    if out.is_null() {
        return fail(SwarmcovStatus::NullPointer, "null output pointer");
    }
    // SAFETY: checked non-null; the caller guarantees it is writable.
    out.write(value);
    SwarmcovStatus::Ok
}

unsafe fn map_ref<'a>(map: *const SwarmcovMap) -> Result<&'a GridMap, SwarmcovStatus> {
    // SAFETY: a non-null handle came from this library and is still live.
    map.as_ref()
        .map(|m| &m.map)
        .ok_or_else(|| fail(SwarmcovStatus::NullPointer, "null map handle"))
}

unsafe fn result_ref<'a>(r: *const SwarmcovResult) -> Option<&'a SwarmcovResult> {
    // SAFETY: as for maps.
    r.as_ref()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn swarmcov_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn swarmcov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses map text (`rows cols` header, then `.`/`#` rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_parse(
    text: *const c_char,
    out: *mut *mut SwarmcovMap,
) -> SwarmcovStatus {
    guard(|| {
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match GridMap::parse("map", text) {
            Ok(map) => put(out, Box::into_raw(Box::new(SwarmcovMap { map }))),
            Err(e) => fail(SwarmcovStatus::InvalidMap, e.to_string()),
        }
    })
}

/// Loads a built-in map (`map1` to `map6`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_builtin(
    name: *const c_char,
    out: *mut *mut SwarmcovMap,
) -> SwarmcovStatus {
    guard(|| {
        let name = match str_arg(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match builtin(name) {
            Some(map) => put(out, Box::into_raw(Box::new(SwarmcovMap { map }))),
            None => fail(
                SwarmcovStatus::InvalidArgument,
                format!("unknown built-in map {name:?}"),
            ),
        }
    })
}

/// Releases a map. Null is ignored.
///
/// # Safety
/// `map` must be null or a live handle from this library, not used again.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_free(map: *mut SwarmcovMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Grid rows; 0 for a null handle.
///
/// # Safety
///
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_rows(map: *const SwarmcovMap) -> usize {
    map_ref(map).map_or(0, |m| m.rows())
}

/// Grid columns; 0 for a null handle.
///
/// # Safety
///
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_cols(map: *const SwarmcovMap) -> usize {
    map_ref(map).map_or(0, |m| m.cols())
}

/// Number of visitable (free) cells; 0 for a null handle.
///
/// # Safety
///
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_visitable_count(map: *const SwarmcovMap) -> usize {
    map_ref(map).map_or(0, |m| m.visitable_count())
}

/// Whether cell (row, col) is an obstacle. Out-of-range cells count as blocked.
///
/// # Safety
///
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_is_blocked(
    map: *const SwarmcovMap,
    row: usize,
    col: usize,
) -> bool {
    map_ref(map).map_or(true, |m| {
        let c = swarmcov::Coord::new(row, col);
        !m.contains(c) || m.is_blocked(c)
    })
}

/// Lower bound on covering epochs: `ceil((V - uavs) / uavs)`.
///
/// # Safety
///
/// `map` must be null or a live handle from this library, and output pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_min_epochs(
    map: *const SwarmcovMap,
    uavs: usize,
    out: *mut u32,
) -> SwarmcovStatus {
    guard(|| match map_ref(map) {
        Err(s) => s,
        Ok(m) => match m.theoretical_min_epochs(uavs) {
            Ok(v) => put(out, v),
            Err(e) => fail(SwarmcovStatus::InvalidArgument, e.to_string()),
        },
    })
}

/// Epoch budget of a simulation: twice the lower bound.
///
/// # Safety
///
/// `map` must be null or a live handle from this library, and output pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_map_max_epochs(
    map: *const SwarmcovMap,
    uavs: usize,
    out: *mut u32,
) -> SwarmcovStatus {
    guard(|| match map_ref(map) {
        Err(s) => s,
        Ok(m) => match m.max_epochs(uavs) {
            Ok(v) => put(out, v),
            Err(e) => fail(SwarmcovStatus::InvalidArgument, e.to_string()),
        },
    })
}

/// Genotype length for `uavs` UAVs: one gene per UAV per visitable cell.
///
/// # Safety
///
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_genotype_length(map: *const SwarmcovMap, uavs: usize) -> usize {
    map_ref(map).map_or(0, |m| swarmcov::genotype_length(m, uavs))
}

/// Simulates one genotype (`len` genes in `[0, 1]`, UAV-major).
///
/// # Safety
/// `genes` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_evaluate(
    map: *const SwarmcovMap,
    uavs: usize,
    genes: *const f64,
    len: usize,
    out: *mut *mut SwarmcovResult,
) -> SwarmcovStatus {
    guard(|| {
        let m = match map_ref(map) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if genes.is_null() && len > 0 {
            return fail(SwarmcovStatus::NullPointer, "null gene array");
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(genes, len)
        };
        let g = match Genotype::new(slice.to_vec()) {
            Ok(g) => g,
            Err(e) => return fail(SwarmcovStatus::InvalidArgument, e.to_string()),
        };
        match evaluate(&g, m, uavs) {
            Ok(sim) => put(
                out,
                Box::into_raw(Box::new(SwarmcovResult {
                    sim,
                    genotype: g.into_genes(),
                })),
            ),
            Err(e) => fail(SwarmcovStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Default GA settings.
#[no_mangle]
pub extern "C" fn swarmcov_ga_params_default() -> SwarmcovGaParams {
    let d = GaConfig::default();
    SwarmcovGaParams {
        population_size: d.population_size,
        generations: d.generations,
        crossover_rate: d.crossover_rate,
        crossover: d.crossover.into(),
        mutation_rate: d.mutation_rate.unwrap_or(-1.0),
        tournament_size: d.tournament_size,
        elitism: d.elitism,
        seed: d.seed,
        early_stop: d.early_stop_at_lower_bound,
    }
}

/// Runs the GA and returns its best solution.
///
/// # Safety
/// `params` must be null (defaults) or point to a valid struct; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_solve(
    map: *const SwarmcovMap,
    uavs: usize,
    params: *const SwarmcovGaParams,
    out: *mut *mut SwarmcovResult,
) -> SwarmcovStatus {
    guard(|| {
        let m = match map_ref(map) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let p = params
            .as_ref()
            .copied()
            .unwrap_or_else(|| swarmcov_ga_params_default());
        let config = GaConfig {
            population_size: p.population_size,
            generations: p.generations,
            crossover_rate: p.crossover_rate,
            crossover: p.crossover.into(),
            mutation_rate: (p.mutation_rate >= 0.0).then_some(p.mutation_rate),
            tournament_size: p.tournament_size,
            elitism: p.elitism,
            seed: p.seed,
            early_stop_at_lower_bound: p.early_stop,
        };
        match run_ga(&config, m, uavs) {
            Ok(run) => put(
                out,
                Box::into_raw(Box::new(SwarmcovResult {
                    sim: run.best_sim,
                    genotype: run.best_genotype.into_genes(),
                })),
            ),
            Err(e) => fail(SwarmcovStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `result` must be null or a live handle from this library, not used again.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_free(result: *mut SwarmcovResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Fitness: epochs to cover, or the budget plus unvisited cells.
/// `UINT32_MAX` for a null handle.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_fitness(result: *const SwarmcovResult) -> u32 {
    result_ref(result).map_or(u32::MAX, |r| r.sim.fitness)
}

/// Whether every cell was visited; false for a null handle.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_covered(result: *const SwarmcovResult) -> bool {
    result_ref(result).is_some_and(|r| r.sim.covered)
}

/// Last epoch in which any UAV moved; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_epochs_used(result: *const SwarmcovResult) -> u32 {
    result_ref(result).map_or(0, |r| r.sim.epochs_used)
}

/// Cells never visited; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_unvisited(result: *const SwarmcovResult) -> usize {
    result_ref(result).map_or(0, |r| r.sim.unvisited)
}

/// Number of UAV paths; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_uav_count(result: *const SwarmcovResult) -> usize {
    result_ref(result).map_or(0, |r| r.sim.paths.len())
}

/// Number of recorded positions of UAV `uav` (start included); 0 if out of range.
///
/// # Safety
///
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_path_len(
    result: *const SwarmcovResult,
    uav: usize,
) -> usize {
    result_ref(result)
        .and_then(|r| r.sim.paths.get(uav))
        .map_or(0, |p| p.len())
}

/// Position of UAV `uav` after `step` recorded epochs (step 0 is the start).
///
/// # Safety
///
/// `result` must be null or a live handle from this library, and output pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_path_cell(
    result: *const SwarmcovResult,
    uav: usize,
    step: usize,
    row: *mut usize,
    col: *mut usize,
) -> SwarmcovStatus {
    guard(|| {
        let Some(r) = result_ref(result) else {
            return fail(SwarmcovStatus::NullPointer, "null result handle");
        };
        let Some(c) = r.sim.paths.get(uav).and_then(|p| p.get(step)) else {
            return fail(
                SwarmcovStatus::OutOfRange,
                format!("no position for UAV {uav} at step {step}"),
            );
        };
        if row.is_null() || col.is_null() {
            return fail(SwarmcovStatus::NullPointer, "null output pointer");
        }
        put(row, c.row);
        put(col, c.col)
    })
}

/// Copies up to `cap` genes into `buf` and returns the genotype length, so
/// a call with `cap = 0` queries the size.
///
/// # Safety
/// `buf` must be null or point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn swarmcov_result_genotype(
    result: *const SwarmcovResult,
    buf: *mut f64,
    cap: usize,
) -> usize {
    let Some(r) = result_ref(result) else {
        return 0;
    };
    if !buf.is_null() {
        let n = cap.min(r.genotype.len());
        ptr::copy_nonoverlapping(r.genotype.as_ptr(), buf, n);
    }
    r.genotype.len()
}
