/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the beamspace NOMA downlink simulator.
 *
 * The library designs transmit beams for a single-cell downlink in which
 * angularly clustered users share base beams through successive interference
 * cancellation, and evaluates the resulting ergodic weighted sum rate by
 * deterministic Monte Carlo simulation together with a closed-form upper
 * bound.
 *
 * Usage pattern: parse a configuration (bn_config), build the user drop and
 * clustering for it (bn_scenario), then either run one algorithm on it
 * (bn_run -> bn_result) or produce whole experiment tables (bn_sweep_csv,
 * bn_trace_csv).  All handles are freed with their bn_*_free function; every
 * function returning bn_status leaves a human-readable message for the
 * calling thread in bn_last_error() when it fails.
 *
 * Algorithms are named by strings: "alg1" (every user may combine every base
 * beam), "alg2" (beams partitioned across clusters first), "alg3" (one shared
 * beam per cluster), and the baselines "mf", "sdma", "tdma".
 */

#ifndef BEAMNOMA_H
#define BEAMNOMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bn_status {
  BN_OK = 0,
  BN_EINVAL = 1,   /* invalid argument or configuration value */
  BN_EPARSE = 2,   /* malformed configuration text */
  BN_EDOMAIN = 3,  /* numeric input outside its mathematical domain */
  BN_EIO = 4,      /* file could not be read or written */
  BN_EINTERNAL = 5 /* unexpected failure */
} bn_status;

/* Message describing this thread's most recent failure; never NULL. */
const char* bn_last_error(void);

/* Library version as "major.minor.patch". */
const char* bn_version(void);

/* ------------------------------------------------------------------ config */

typedef struct bn_config bn_config;

/* Parse a key/value configuration document (see README for the schema). */
bn_status bn_config_parse_text(const char* text, bn_config** out);
bn_status bn_config_parse_file(const char* path, bn_config** out);
void bn_config_free(bn_config* cfg);

/* Overrides applied after parsing. */
bn_status bn_config_set_seed(bn_config* cfg, uint64_t seed);
bn_status bn_config_set_snr_db(bn_config* cfg, double snr_db);

int bn_config_num_antennas(const bn_config* cfg);
int bn_config_num_ues(const bn_config* cfg);
double bn_config_snr_db(const bn_config* cfg);
int bn_config_mc_realizations(const bn_config* cfg);
uint64_t bn_config_seed(const bn_config* cfg);

/* ---------------------------------------------------------------- scenario */

typedef struct bn_scenario bn_scenario;

/* Draw the users for the config's seed, cluster them, and fix the decoding
 * order.  The scenario is immutable and may be shared across runs. */
bn_status bn_scenario_build(const bn_config* cfg, bn_scenario** out);
void bn_scenario_free(bn_scenario* scenario);

int bn_scenario_num_clusters(const bn_scenario* scenario);
int bn_scenario_num_ues(const bn_scenario* scenario);

/* --------------------------------------------------------------------- run */

typedef struct bn_result bn_result;

/* Run one algorithm on the scenario and evaluate it with the config's Monte
 * Carlo settings.  `threads` >= 1; results are identical for any value.
 * When `timing` is nonzero the wall time is measured, otherwise it is 0 so
 * repeated runs produce identical output. */
bn_status bn_run(const bn_config* cfg, const bn_scenario* scenario, const char* algorithm,
                 int threads, int timing, bn_result** out);
void bn_result_free(bn_result* result);

double bn_result_weighted_sum_rate(const bn_result* result);
double bn_result_sum_rate_stderr(const bn_result* result);
double bn_result_upper_bound(const bn_result* result);
int bn_result_outer_iters(const bn_result* result);
int bn_result_converged(const bn_result* result);
double bn_result_wall_time_ms(const bn_result* result);
int bn_result_num_ues(const bn_result* result);
/* Ergodic rate of one user (bits/s/Hz); NaN when `ue` is out of range. */
double bn_result_ue_rate(const bn_result* result, int ue);
/* Number of recorded outer iterations (0 for baselines). */
int bn_result_trace_len(const bn_result* result);
double bn_result_trace_surrogate(const bn_result* result, int i);
double bn_result_trace_budget_usage(const bn_result* result, int i);

/* ------------------------------------------------------------------ tables */

/* Full experiment table: one CSV row per (algorithm, axis value), sorted by
 * algorithm then value.  `axis` is "snr_db", "k" or "n_t"; `values` must be
 * strictly ascending.  The returned string is freed with bn_string_free. */
bn_status bn_sweep_csv(const bn_config* cfg, const char* axis, const double* values,
                       int num_values, const char* const* algorithms, int num_algorithms,
                       int threads, int timing, char** out_csv);

/* Convergence trace of one solver run as CSV (iteration, surrogate,
 * budget_usage). */
bn_status bn_trace_csv(const bn_config* cfg, const char* algorithm, char** out_csv);

void bn_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BEAMNOMA_H */
