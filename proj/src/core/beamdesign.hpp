// SPDX-License-Identifier: Apache-2.0
//
// Beam-design solvers: three block-coordinate algorithms that maximize the
// closed-form weighted-sum-rate bound (full-space, partial-space multi-beam,
// partial-space single-beam) plus matched-filter, SDMA and TDMA baselines.

#pragma once

#include <cstdint>
#include <vector>

#include "core/rates.hpp"

namespace beamnoma {

// Iteration controls shared by all three solvers.
struct SolverConfig {
  int max_outer_iters = 50;
  int max_inner_iters = 500;
  double outer_tol = 1e-4;       // relative per-iteration surrogate decrease at
                                 // which the outer loop declares convergence
  double multiplier_tol = 0.0;   // absolute budget tolerance; <= 0 means 1e-6 * budget
  double step_mu = 0.01;         // initial gradient step for the power-budget multiplier
  double step_mu2 = 0.01;        // same, for the partial-space solver
  double step_omega = 0.01;      // same, for per-cluster share multipliers
  double initial_multiplier = 1.0;

  void validate() const;  // throws std::invalid_argument
  double budget_tolerance(double rhs) const {
    return multiplier_tol > 0.0 ? multiplier_tol : 1e-6 * rhs;
  }
};

// Per-run diagnostics.  The surrogate is the block-coordinate objective
// recorded at the start of each outer iteration with the auxiliary variables
// at their exact per-block minimizers; it equals
//   sum_u weight_u * (1 - ln(1 + sinr_u)) / ln 2
// summed over UE-beam terms, so it is non-increasing run-long.
struct SolverTrace {
  std::vector<double> surrogate_per_outer_iter;
  std::vector<double> budget_usage_per_iter;  // selected power / budget
  int outer_iters_used = 0;
  bool converged = false;
  std::uint64_t update_ops = 0;    // scalar update/residual terms evaluated
  std::uint64_t inner_sweeps = 0;  // multiplier-search residual evaluations
  std::vector<double> multipliers; // final multiplier values (budget first)
};

struct SolveResult {
  BeamDesign design;
  SolverTrace trace;
};

// Every UE may combine every base beam; powers start uniform and follow
// alternating MMSE-receiver / weight / power updates, with the budget
// multiplier searched until the residual meets the tolerance.
SolveResult solve_full_space(const ClusteredScenario& scenario, const SolverConfig& config);

// Assign each base beam to the single cluster that earns the highest
// weighted sum rate on it under the given candidate powers (ties go to the
// lowest cluster index).  Returns the owning cluster index per beam.
std::vector<int> select_beams(const arma::mat& candidate_powers,
                              const ClusteredScenario& scenario);

// Beams are first partitioned across clusters (select_beams with uniform
// candidates), removing inter-cluster interference; the power loop then runs
// over owned beams only.
SolveResult solve_partial_space(const ClusteredScenario& scenario, const SolverConfig& config);

// Like solve_partial_space, but each cluster transmits one shared beam:
// per-beam totals and per-UE shares are optimized in alternation, every UE's
// row being its cluster's beam scaled by its share.
SolveResult solve_single_beam(const ClusteredScenario& scenario, const SolverConfig& config);

// One base beam per cluster, chosen by the cluster's sector position on the
// beam-index grid; the budget splits equally across clusters and then across
// each cluster's UEs.
BeamDesign baseline_mf(const ClusteredScenario& scenario);

// Every UE alone on its strongest base beam with budget/K power, all UEs
// simultaneous, receivers without interference cancellation: evaluate with
// Interference::full.
BeamDesign baseline_sdma(const ClusteredScenario& scenario);

// Every UE alone in a 1/K time share at full budget on its strongest beam.
// There is no design matrix to return; the report holds the Monte Carlo
// means, their standard error, and the matching closed-form bound.
RateReport baseline_tdma(const ClusteredScenario& scenario, int num_realizations,
                         std::uint64_t master_seed, int threads = 1);

}  // namespace beamnoma
