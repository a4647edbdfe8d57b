// SPDX-License-Identifier: Apache-2.0

#include "core/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "core/rng.hpp"

namespace beamnoma {

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::alg2: return "alg2";
    case Algorithm::alg3: return "alg3";
    case Algorithm::mf: return "mf";
    case Algorithm::sdma: return "sdma";
    case Algorithm::tdma: return "tdma";
  }
  throw std::invalid_argument("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "alg1") return Algorithm::alg1;
  if (name == "alg2") return Algorithm::alg2;
  if (name == "alg3") return Algorithm::alg3;
  if (name == "mf") return Algorithm::mf;
  if (name == "sdma") return Algorithm::sdma;
  if (name == "tdma") return Algorithm::tdma;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected alg1, alg2, alg3, mf, sdma or tdma)");
}

void SweepSpec::validate() const {
  if (axis != "snr_db" && axis != "k" && axis != "n_t")
    throw std::invalid_argument("sweep: axis must be snr_db, k or n_t");
  if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("sweep: values must be strictly ascending");
  if (axis != "snr_db")
    for (double v : values)
      if (v != std::floor(v) || v < 1.0)
        throw std::invalid_argument("sweep: " + axis + " values must be positive integers");
  if (algorithms.empty()) throw std::invalid_argument("sweep: algorithms must be non-empty");
}

ClusteredScenario build_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ArrayConfig array;
  array.num_antennas = cfg.n_t;
  ChannelGenParams params;
  params.num_paths = cfg.num_paths;
  params.angular_spread_deg = cfg.angular_spread_deg;
  params.path_decay = cfg.path_decay;
  params.pathloss_exponent = cfg.pathloss_exponent;
  params.cell_radius_m = cfg.cell_radius_m;

  std::vector<UEProfile> profiles;
  profiles.reserve(cfg.k);
  for (int u = 0; u < cfg.k; ++u) {
    StreamRng rng(cfg.seed, rng_domain::kUeDrop, static_cast<std::uint64_t>(u));
    auto [profile, paths] = generate_ue_profile(rng, params, array, u);
    profile.weight = cfg.weights.empty() ? 1.0 : cfg.weights[u];
    profiles.push_back(std::move(profile));
  }
  return build_clustered_scenario(profiles, cfg.sectors(), cfg.power_budget(), cfg.n_t);
}

RunOutcome run_algorithm(Algorithm algo, const ScenarioConfig& cfg,
                         const ClusteredScenario& scenario, int threads, bool timing) {
  RunOutcome out;
  out.algorithm = algo;
  const auto start = std::chrono::steady_clock::now();
  switch (algo) {
    case Algorithm::alg1:
    case Algorithm::alg2:
    case Algorithm::alg3: {
      SolveResult solved = algo == Algorithm::alg1   ? solve_full_space(scenario, cfg.solver)
                           : algo == Algorithm::alg2 ? solve_partial_space(scenario, cfg.solver)
                                                     : solve_single_beam(scenario, cfg.solver);
      out.report = ergodic_weighted_sum_rate(solved.design, scenario, cfg.mc_realizations,
                                             cfg.seed, threads, Interference::sic);
      out.outer_iters = solved.trace.outer_iters_used;
      out.converged = solved.trace.converged;
      out.design = std::move(solved.design);
      out.trace = std::move(solved.trace);
      out.has_design = true;
      break;
    }
    case Algorithm::mf: {
      out.design = baseline_mf(scenario);
      out.report = ergodic_weighted_sum_rate(out.design, scenario, cfg.mc_realizations,
                                             cfg.seed, threads, Interference::sic);
      out.has_design = true;
      break;
    }
    case Algorithm::sdma: {
      out.design = baseline_sdma(scenario);
      out.report = ergodic_weighted_sum_rate(out.design, scenario, cfg.mc_realizations,
                                             cfg.seed, threads, Interference::full);
      out.has_design = true;
      break;
    }
    case Algorithm::tdma: {
      out.report = baseline_tdma(scenario, cfg.mc_realizations, cfg.seed, threads);
      break;
    }
  }
  if (timing) {
    const auto end = std::chrono::steady_clock::now();
    out.wall_time_ms = std::chrono::duration<double, std::milli>(end - start).count();
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

struct SweepRow {
  std::string algorithm;
  double axis_value = 0.0;
  std::string text;
};

ScenarioConfig config_for_axis_value(const ScenarioConfig& base, const std::string& axis,
                                     double value) {
  ScenarioConfig cfg = base;
  if (axis == "snr_db") {
    cfg.p_max_db = value;
  } else if (axis == "k") {
    cfg.k = static_cast<int>(value);
    if (!base.weights.empty())
      throw std::invalid_argument("sweep: custom weights cannot be combined with a k axis");
  } else {  // n_t
    cfg.n_t = static_cast<int>(value);
    // An explicit sector count stays; the default tracks the new n_t.
  }
  cfg.validate();
  return cfg;
}

}  // namespace

std::string run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, int threads,
                      bool timing) {
  cfg.validate();
  sweep.validate();

  std::vector<SweepRow> rows;
  rows.reserve(sweep.values.size() * sweep.algorithms.size());
  for (double value : sweep.values) {
    const ScenarioConfig point = config_for_axis_value(cfg, sweep.axis, value);
    const ClusteredScenario scenario = build_scenario(point);
    for (Algorithm algo : sweep.algorithms) {
      const RunOutcome run = run_algorithm(algo, point, scenario, threads, timing);
      std::ostringstream line;
      line << algorithm_name(algo) << ',' << sweep.axis << ',' << format_double(value) << ','
           << point.n_t << ',' << point.k << ',' << format_double(point.p_max_db) << ','
           << point.mc_realizations << ',' << point.seed << ','
           << format_double(run.report.weighted_sum_rate) << ','
           << format_double(run.report.sum_rate_stderr) << ','
           << format_double(run.report.upper_bound) << ',' << run.outer_iters << ','
           << (run.converged ? "true" : "false") << ',' << format_double(run.wall_time_ms);
      rows.push_back({algorithm_name(algo), value, line.str()});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    return a.axis_value < b.axis_value;
  });

  std::string csv =
      "algorithm,axis_name,axis_value,n_t,k,snr_db,mc_realizations,seed,weighted_sum_rate,"
      "sum_rate_stderr,upper_bound,outer_iters,converged,wall_time_ms\n";
  for (const SweepRow& row : rows) {
    csv += row.text;
    csv += '\n';
  }
  return csv;
}

std::string convergence_trace_csv(const ScenarioConfig& cfg, Algorithm algo) {
  cfg.validate();
  if (algo != Algorithm::alg1 && algo != Algorithm::alg2 && algo != Algorithm::alg3)
    throw std::invalid_argument("trace: only alg1, alg2 and alg3 produce iteration traces");
  const ClusteredScenario scenario = build_scenario(cfg);
  const SolveResult solved = algo == Algorithm::alg1 ? solve_full_space(scenario, cfg.solver)
                             : algo == Algorithm::alg2
                                 ? solve_partial_space(scenario, cfg.solver)
                                 : solve_single_beam(scenario, cfg.solver);
  std::string csv = "iteration,surrogate,budget_usage\n";
  for (std::size_t i = 0; i < solved.trace.surrogate_per_outer_iter.size(); ++i) {
    csv += std::to_string(i + 1);
    csv += ',';
    csv += format_double(solved.trace.surrogate_per_outer_iter[i]);
    csv += ',';
    csv += format_double(i < solved.trace.budget_usage_per_iter.size()
                             ? solved.trace.budget_usage_per_iter[i]
                             : 0.0);
    csv += '\n';
  }
  return csv;
}

}  // namespace beamnoma
