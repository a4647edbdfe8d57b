// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: scenario construction from a config, parameter
// sweeps over SNR / UE count / antenna count, convergence traces, and CSV
// emission with stable columns and deterministic row order.

#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace beamnoma {

enum class Algorithm { alg1, alg2, alg3, mf, sdma, tdma };

// Canonical lowercase name ("alg1", ..., "tdma").
const char* algorithm_name(Algorithm algo);
// Inverse of algorithm_name; throws std::invalid_argument on unknown names.
Algorithm algorithm_from_name(const std::string& name);

struct SweepSpec {
  std::string axis = "snr_db";        // one of: snr_db, k, n_t
  std::vector<double> values;         // non-empty, strictly ascending
  std::vector<Algorithm> algorithms;  // non-empty
  // Throws std::invalid_argument naming the offending field; integer axes
  // additionally require integer-valued entries.
  void validate() const;
};

// Draw the UE population from per-UE streams of the config seed, apply the
// configured weights, and fix clusters and decoding order.  UE u's profile
// depends only on (seed, u), so growing k extends the population without
// disturbing earlier UEs.
ClusteredScenario build_scenario(const ScenarioConfig& cfg);

// Everything one CSV row needs about running one algorithm on one scenario.
struct RunOutcome {
  Algorithm algorithm;
  RateReport report;
  int outer_iters = 0;     // 0 for baselines
  bool converged = true;   // baselines always count as converged
  double wall_time_ms = 0.0;
  BeamDesign design;       // unused for tdma (time sharing has no design matrix)
  SolverTrace trace;       // empty for baselines
  bool has_design = false;
};

// Solve (or instantiate the baseline) and evaluate the ergodic weighted sum
// rate plus the matching closed-form bound.  `timing` fills wall_time_ms with
// real elapsed milliseconds; otherwise it stays 0 so output is reproducible.
RunOutcome run_algorithm(Algorithm algo, const ScenarioConfig& cfg,
                         const ClusteredScenario& scenario, int threads = 1,
                         bool timing = false);

// One row per (algorithm, axis value), sorted by algorithm name then value.
// Columns: algorithm, axis_name, axis_value, n_t, k, snr_db, mc_realizations,
// seed, weighted_sum_rate, sum_rate_stderr, upper_bound, outer_iters,
// converged, wall_time_ms.
std::string run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, int threads = 1,
                      bool timing = false);

// Per-outer-iteration trace of one solver run as CSV with columns
// iteration, surrogate, budget_usage.  Only alg1/alg2/alg3 have traces.
std::string convergence_trace_csv(const ScenarioConfig& cfg, Algorithm algo);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace beamnoma
