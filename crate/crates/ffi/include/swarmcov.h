#ifndef SWARMCOV_H
#define SWARMCOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible calls.
 */
typedef enum SwarmcovStatus {
  SWARMCOV_STATUS_OK = 0,
  SWARMCOV_STATUS_NULL_POINTER = 1,
  SWARMCOV_STATUS_INVALID_UTF8 = 2,
  SWARMCOV_STATUS_INVALID_MAP = 3,
  SWARMCOV_STATUS_INVALID_ARGUMENT = 4,
  SWARMCOV_STATUS_OUT_OF_RANGE = 5,
  SWARMCOV_STATUS_INTERNAL = 6,
} SwarmcovStatus;

/**
 * Recombination operator.
 */
typedef enum SwarmcovCrossover {
  SWARMCOV_CROSSOVER_UNIFORM = 0,
  SWARMCOV_CROSSOVER_ONE_POINT = 1,
  SWARMCOV_CROSSOVER_TWO_POINT = 2,
} SwarmcovCrossover;

/**
 * Opaque grid map handle.
 */
typedef struct SwarmcovMap SwarmcovMap;

/**
 * Opaque simulation or solve result handle.
 */
typedef struct SwarmcovResult SwarmcovResult;

/**
 * GA settings. A negative `mutation_rate` selects the default
 * `max(0.025, 1 / genotype length)`.
 */
typedef struct SwarmcovGaParams {
  size_t population_size;
  size_t generations;
  double crossover_rate;
  enum SwarmcovCrossover crossover;
  double mutation_rate;
  size_t tournament_size;
  size_t elitism;
  uint64_t seed;
  bool early_stop;
} SwarmcovGaParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *swarmcov_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *swarmcov_last_error(void);

/**
 * Parses map text (`rows cols` header, then `.`/`#` rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SwarmcovStatus swarmcov_map_parse(const char *text, struct SwarmcovMap **out);

/**
 * Loads a built-in map (`map1` to `map6`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum SwarmcovStatus swarmcov_map_builtin(const char *name, struct SwarmcovMap **out);

/**
 * Releases a map. Null is ignored.
 *
 * # Safety
 * `map` must be null or a live handle from this library, not used again.
 */
void swarmcov_map_free(struct SwarmcovMap *map);

/**
 * Grid rows; 0 for a null handle.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library.
 */
size_t swarmcov_map_rows(const struct SwarmcovMap *map);

/**
 * Grid columns; 0 for a null handle.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library.
 */
size_t swarmcov_map_cols(const struct SwarmcovMap *map);

/**
 * Number of visitable (free) cells; 0 for a null handle.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library.
 */
size_t swarmcov_map_visitable_count(const struct SwarmcovMap *map);

/**
 * Whether cell (row, col) is an obstacle. Out-of-range cells count as blocked.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library.
 */
bool swarmcov_map_is_blocked(const struct SwarmcovMap *map, size_t row, size_t col);

/**
 * Lower bound on covering epochs: `ceil((V - uavs) / uavs)`.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library, and output pointers must be null or writable.
 */
enum SwarmcovStatus swarmcov_map_min_epochs(const struct SwarmcovMap *map,
                                            size_t uavs,
                                            uint32_t *out);

/**
 * Epoch budget of a simulation: twice the lower bound.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library, and output pointers must be null or writable.
 */
enum SwarmcovStatus swarmcov_map_max_epochs(const struct SwarmcovMap *map,
                                            size_t uavs,
                                            uint32_t *out);

/**
 * Genotype length for `uavs` UAVs: one gene per UAV per visitable cell.
 *
 * # Safety
 *
 * `map` must be null or a live handle from this library.
 */
size_t swarmcov_genotype_length(const struct SwarmcovMap *map, size_t uavs);

/**
 * Simulates one genotype (`len` genes in `[0, 1]`, UAV-major).
 *
 * # Safety
 * `genes` must point to `len` readable doubles; `out` must be writable.
 */
enum SwarmcovStatus swarmcov_evaluate(const struct SwarmcovMap *map,
                                      size_t uavs,
                                      const double *genes,
                                      size_t len,
                                      struct SwarmcovResult **out);

/**
 * Default GA settings.
 */
struct SwarmcovGaParams swarmcov_ga_params_default(void);

/**
 * Runs the GA and returns its best solution.
 *
 * # Safety
 * `params` must be null (defaults) or point to a valid struct; `out` must be
 * writable.
 */
enum SwarmcovStatus swarmcov_solve(const struct SwarmcovMap *map,
                                   size_t uavs,
                                   const struct SwarmcovGaParams *params,
                                   struct SwarmcovResult **out);

/**
 * Releases a result. Null is ignored.
 *
 * # Safety
 * `result` must be null or a live handle from this library, not used again.
 */
void swarmcov_result_free(struct SwarmcovResult *result);

/**
 * Fitness: epochs to cover, or the budget plus unvisited cells.
 * `UINT32_MAX` for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
uint32_t swarmcov_result_fitness(const struct SwarmcovResult *result);

/**
 * Whether every cell was visited; false for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
bool swarmcov_result_covered(const struct SwarmcovResult *result);

/**
 * Last epoch in which any UAV moved; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
uint32_t swarmcov_result_epochs_used(const struct SwarmcovResult *result);

/**
 * Cells never visited; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
size_t swarmcov_result_unvisited(const struct SwarmcovResult *result);

/**
 * Number of UAV paths; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
size_t swarmcov_result_uav_count(const struct SwarmcovResult *result);

/**
 * Number of recorded positions of UAV `uav` (start included); 0 if out of range.
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library.
 */
size_t swarmcov_result_path_len(const struct SwarmcovResult *result, size_t uav);

/**
 * Position of UAV `uav` after `step` recorded epochs (step 0 is the start).
 *
 * # Safety
 *
 * `result` must be null or a live handle from this library, and output pointers must be null or writable.
 */
enum SwarmcovStatus swarmcov_result_path_cell(const struct SwarmcovResult *result,
                                              size_t uav,
                                              size_t step,
                                              size_t *row,
                                              size_t *col);

/**
 * Copies up to `cap` genes into `buf` and returns the genotype length, so
 * a call with `cap = 0` queries the size.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable doubles.
 */
size_t swarmcov_result_genotype(const struct SwarmcovResult *result, double *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWARMCOV_H */
