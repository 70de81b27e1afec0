/* Build: cc solve.c -I../include -L../../../target/release -lswarmcov_ffi */
#include <stdio.h>
#include "swarmcov.h"

int main(void) {
    SwarmcovMap *map = NULL;
    if (swarmcov_map_builtin("map2", &map) != SWARMCOV_STATUS_OK) {
        fprintf(stderr, "%s\n", swarmcov_last_error());
        return 1;
    }
    SwarmcovGaParams params = swarmcov_ga_params_default();
    params.population_size = 500;
    params.generations = 100;
    params.seed = 42;

    SwarmcovResult *result = NULL;
    if (swarmcov_solve(map, 3, &params, &result) != SWARMCOV_STATUS_OK) {
        fprintf(stderr, "%s\n", swarmcov_last_error());
        swarmcov_map_free(map);
        return 1;
    }
    printf("covered=%d fitness=%u\n", swarmcov_result_covered(result),
           swarmcov_result_fitness(result));
    for (size_t u = 0; u < swarmcov_result_uav_count(result); u++) {
        size_t row, col;
        size_t last = swarmcov_result_path_len(result, u) - 1;
        swarmcov_result_path_cell(result, u, last, &row, &col);
        printf("uav %zu ends at (%zu,%zu)\n", u + 1, row, col);
    }
    swarmcov_result_free(result);
    swarmcov_map_free(map);
    return 0;
}
