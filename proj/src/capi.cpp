// SPDX-License-Identifier: Apache-2.0

#include "beamnoma/beamnoma.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/config.hpp"
#include "core/sim.hpp"

namespace {

thread_local std::string g_last_error = "no error";

bn_status fail(bn_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Run `fn` (returning bn_status) with every exception mapped onto a status
// code and its message captured for bn_last_error.
template <typename Fn>
bn_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const beamnoma::ConfigParseError& e) {
    return fail(BN_EPARSE, e.what());
  } catch (const std::domain_error& e) {
    return fail(BN_EDOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BN_EINVAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BN_EINTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BN_EINTERNAL, e.what());
  } catch (...) {
    return fail(BN_EINTERNAL, "unknown failure");
  }
}

}  // namespace

struct bn_config {
  beamnoma::ScenarioConfig cfg;
};

struct bn_scenario {
  beamnoma::ClusteredScenario scenario;
};

struct bn_result {
  beamnoma::RunOutcome outcome;
};

extern "C" {

const char* bn_last_error(void) { return g_last_error.c_str(); }

const char* bn_version(void) { return "1.0.0"; }

/* ------------------------------------------------------------------ config */

bn_status bn_config_parse_text(const char* text, bn_config** out) {
  if (out == nullptr) return fail(BN_EINVAL, "bn_config_parse_text: out is NULL");
  *out = nullptr;
  if (text == nullptr) return fail(BN_EINVAL, "bn_config_parse_text: text is NULL");
  return guarded([&] {
    auto* handle = new bn_config{beamnoma::parse_scenario_config(text)};
    *out = handle;
    return BN_OK;
  });
}

bn_status bn_config_parse_file(const char* path, bn_config** out) {
  if (out == nullptr) return fail(BN_EINVAL, "bn_config_parse_file: out is NULL");
  *out = nullptr;
  if (path == nullptr) return fail(BN_EINVAL, "bn_config_parse_file: path is NULL");
  return guarded([&]() -> bn_status {
    try {
      auto* handle = new bn_config{beamnoma::load_scenario_config(path)};
      *out = handle;
      return BN_OK;
    } catch (const beamnoma::ConfigParseError&) {
      throw;
    } catch (const std::runtime_error& e) {
      return fail(BN_EIO, e.what());
    }
  });
}

void bn_config_free(bn_config* cfg) { delete cfg; }

bn_status bn_config_set_seed(bn_config* cfg, uint64_t seed) {
  if (cfg == nullptr) return fail(BN_EINVAL, "bn_config_set_seed: cfg is NULL");
  cfg->cfg.seed = seed;
  return BN_OK;
}

bn_status bn_config_set_snr_db(bn_config* cfg, double snr_db) {
  if (cfg == nullptr) return fail(BN_EINVAL, "bn_config_set_snr_db: cfg is NULL");
  if (!std::isfinite(snr_db)) return fail(BN_EINVAL, "bn_config_set_snr_db: snr_db not finite");
  cfg->cfg.p_max_db = snr_db;
  return BN_OK;
}

int bn_config_num_antennas(const bn_config* cfg) { return cfg ? cfg->cfg.n_t : 0; }
int bn_config_num_ues(const bn_config* cfg) { return cfg ? cfg->cfg.k : 0; }
double bn_config_snr_db(const bn_config* cfg) { return cfg ? cfg->cfg.p_max_db : 0.0; }
int bn_config_mc_realizations(const bn_config* cfg) { return cfg ? cfg->cfg.mc_realizations : 0; }
uint64_t bn_config_seed(const bn_config* cfg) { return cfg ? cfg->cfg.seed : 0; }

/* ---------------------------------------------------------------- scenario */

bn_status bn_scenario_build(const bn_config* cfg, bn_scenario** out) {
  if (out == nullptr) return fail(BN_EINVAL, "bn_scenario_build: out is NULL");
  *out = nullptr;
  if (cfg == nullptr) return fail(BN_EINVAL, "bn_scenario_build: cfg is NULL");
  return guarded([&] {
    auto* handle = new bn_scenario{beamnoma::build_scenario(cfg->cfg)};
    *out = handle;
    return BN_OK;
  });
}

void bn_scenario_free(bn_scenario* scenario) { delete scenario; }

int bn_scenario_num_clusters(const bn_scenario* scenario) {
  return scenario ? scenario->scenario.num_clusters() : 0;
}

int bn_scenario_num_ues(const bn_scenario* scenario) {
  return scenario ? scenario->scenario.num_ues() : 0;
}

/* --------------------------------------------------------------------- run */

bn_status bn_run(const bn_config* cfg, const bn_scenario* scenario, const char* algorithm,
                 int threads, int timing, bn_result** out) {
  if (out == nullptr) return fail(BN_EINVAL, "bn_run: out is NULL");
  *out = nullptr;
  if (cfg == nullptr || scenario == nullptr)
    return fail(BN_EINVAL, "bn_run: cfg and scenario must not be NULL");
  if (algorithm == nullptr) return fail(BN_EINVAL, "bn_run: algorithm is NULL");
  if (threads < 1) return fail(BN_EINVAL, "bn_run: threads must be >= 1");
  return guarded([&] {
    const beamnoma::Algorithm algo = beamnoma::algorithm_from_name(algorithm);
    auto* handle = new bn_result{beamnoma::run_algorithm(algo, cfg->cfg, scenario->scenario,
                                                         threads, timing != 0)};
    *out = handle;
    return BN_OK;
  });
}

void bn_result_free(bn_result* result) { delete result; }

double bn_result_weighted_sum_rate(const bn_result* result) {
  return result ? result->outcome.report.weighted_sum_rate : 0.0;
}

double bn_result_sum_rate_stderr(const bn_result* result) {
  return result ? result->outcome.report.sum_rate_stderr : 0.0;
}

double bn_result_upper_bound(const bn_result* result) {
  return result ? result->outcome.report.upper_bound : 0.0;
}

int bn_result_outer_iters(const bn_result* result) {
  return result ? result->outcome.outer_iters : 0;
}

int bn_result_converged(const bn_result* result) {
  return result ? (result->outcome.converged ? 1 : 0) : 0;
}

double bn_result_wall_time_ms(const bn_result* result) {
  return result ? result->outcome.wall_time_ms : 0.0;
}

int bn_result_num_ues(const bn_result* result) {
  return result ? static_cast<int>(result->outcome.report.per_ue_rates.size()) : 0;
}

double bn_result_ue_rate(const bn_result* result, int ue) {
  if (result == nullptr || ue < 0 ||
      ue >= static_cast<int>(result->outcome.report.per_ue_rates.size()))
    return std::numeric_limits<double>::quiet_NaN();
  return result->outcome.report.per_ue_rates[static_cast<std::size_t>(ue)];
}

int bn_result_trace_len(const bn_result* result) {
  return result ? static_cast<int>(result->outcome.trace.surrogate_per_outer_iter.size()) : 0;
}

double bn_result_trace_surrogate(const bn_result* result, int i) {
  if (result == nullptr || i < 0 ||
      i >= static_cast<int>(result->outcome.trace.surrogate_per_outer_iter.size()))
    return std::numeric_limits<double>::quiet_NaN();
  return result->outcome.trace.surrogate_per_outer_iter[static_cast<std::size_t>(i)];
}

double bn_result_trace_budget_usage(const bn_result* result, int i) {
  if (result == nullptr || i < 0 ||
      i >= static_cast<int>(result->outcome.trace.budget_usage_per_iter.size()))
    return std::numeric_limits<double>::quiet_NaN();
  return result->outcome.trace.budget_usage_per_iter[static_cast<std::size_t>(i)];
}

/* ------------------------------------------------------------------ tables */

namespace {

char* copy_to_c_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

bn_status bn_sweep_csv(const bn_config* cfg, const char* axis, const double* values,
                       int num_values, const char* const* algorithms, int num_algorithms,
                       int threads, int timing, char** out_csv) {
  if (out_csv == nullptr) return fail(BN_EINVAL, "bn_sweep_csv: out_csv is NULL");
  *out_csv = nullptr;
  if (cfg == nullptr) return fail(BN_EINVAL, "bn_sweep_csv: cfg is NULL");
  if (axis == nullptr) return fail(BN_EINVAL, "bn_sweep_csv: axis is NULL");
  if (values == nullptr || num_values < 1)
    return fail(BN_EINVAL, "bn_sweep_csv: values must hold at least one entry");
  if (algorithms == nullptr || num_algorithms < 1)
    return fail(BN_EINVAL, "bn_sweep_csv: algorithms must hold at least one entry");
  if (threads < 1) return fail(BN_EINVAL, "bn_sweep_csv: threads must be >= 1");
  return guarded([&] {
    beamnoma::SweepSpec spec;
    spec.axis = axis;
    spec.values.assign(values, values + num_values);
    spec.algorithms.reserve(static_cast<std::size_t>(num_algorithms));
    for (int i = 0; i < num_algorithms; ++i) {
      if (algorithms[i] == nullptr)
        return fail(BN_EINVAL, "bn_sweep_csv: algorithm name is NULL");
      spec.algorithms.push_back(beamnoma::algorithm_from_name(algorithms[i]));
    }
    const std::string csv = beamnoma::run_sweep(cfg->cfg, spec, threads, timing != 0);
    *out_csv = copy_to_c_string(csv);
    return BN_OK;
  });
}

bn_status bn_trace_csv(const bn_config* cfg, const char* algorithm, char** out_csv) {
  if (out_csv == nullptr) return fail(BN_EINVAL, "bn_trace_csv: out_csv is NULL");
  *out_csv = nullptr;
  if (cfg == nullptr) return fail(BN_EINVAL, "bn_trace_csv: cfg is NULL");
  if (algorithm == nullptr) return fail(BN_EINVAL, "bn_trace_csv: algorithm is NULL");
  return guarded([&] {
    const beamnoma::Algorithm algo = beamnoma::algorithm_from_name(algorithm);
    const std::string csv = beamnoma::convergence_trace_csv(cfg->cfg, algo);
    *out_csv = copy_to_c_string(csv);
    return BN_OK;
  });
}

void bn_string_free(char* s) { delete[] s; }

} /* extern "C" */
