/* SPDX-License-Identifier: Apache-2.0 */
/* Build: cc examples/solve.c -Iinclude -L../../target/debug -lwflsa_ffi -o solve */
#include <stdio.h>
#include "wflsa.h"

int main(void) {
    const double w[16] = {0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0};
    const double y[4] = {1, 2, 3, 4};
    WflsaWeights *weights = NULL;
    WflsaSolution *sol = NULL;
    WflsaStatus st = wflsa_weights_new(4, w, &weights);
    if (st != WFLSA_STATUS_OK) {
        fprintf(stderr, "%s\n", wflsa_last_error_message());
        return 1;
    }
    WflsaConfig cfg = wflsa_config_default(0.0, 10.0);
    st = wflsa_solve(weights, y, 4, &cfg, &sol);
    if (st != WFLSA_STATUS_OK) {
        fprintf(stderr, "%s\n", wflsa_last_error_message());
        wflsa_weights_free(weights);
        return 1;
    }
    double beta[4];
    wflsa_solution_beta(sol, beta, 4);
    for (int i = 0; i < 4; i++) printf("%g\n", beta[i]);
    wflsa_solution_free(sol);
    wflsa_weights_free(weights);
    return 0;
}
