// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library strictly through its C interface: handle
// lifecycles, error codes and messages, result accessors, and the CSV
// table entry points.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <beamnoma/beamnoma.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

const char* kConfigText = "n_t: 8, k: 6, p_max_db: 10, mc: 40, seed: 3";

struct ConfigHandle {
  bn_config* ptr = nullptr;
  explicit ConfigHandle(const char* text) { REQUIRE(bn_config_parse_text(text, &ptr) == BN_OK); }
  ~ConfigHandle() { bn_config_free(ptr); }
};

struct ScenarioHandle {
  bn_scenario* ptr = nullptr;
  explicit ScenarioHandle(const bn_config* cfg) {
    REQUIRE(bn_scenario_build(cfg, &ptr) == BN_OK);
  }
  ~ScenarioHandle() { bn_scenario_free(ptr); }
};

struct ResultHandle {
  bn_result* ptr = nullptr;
  ResultHandle(const bn_config* cfg, const bn_scenario* sc, const char* algo, int timing = 0) {
    REQUIRE(bn_run(cfg, sc, algo, 1, timing, &ptr) == BN_OK);
  }
  ~ResultHandle() { bn_result_free(ptr); }
};

}  // namespace

TEST_CASE("version and error strings are always present") {
  CHECK(std::string(bn_version()) == "1.0.0");
  REQUIRE(bn_last_error() != nullptr);
  CHECK(std::string(bn_last_error()) == "no error");
}

TEST_CASE("configs parse, echo their fields, and accept overrides") {
  ConfigHandle cfg(kConfigText);
  CHECK(bn_config_num_antennas(cfg.ptr) == 8);
  CHECK(bn_config_num_ues(cfg.ptr) == 6);
  CHECK(bn_config_snr_db(cfg.ptr) == 10.0);
  CHECK(bn_config_mc_realizations(cfg.ptr) == 40);
  CHECK(bn_config_seed(cfg.ptr) == 3);

  CHECK(bn_config_set_seed(cfg.ptr, 9) == BN_OK);
  CHECK(bn_config_seed(cfg.ptr) == 9);
  CHECK(bn_config_set_snr_db(cfg.ptr, 20.0) == BN_OK);
  CHECK(bn_config_snr_db(cfg.ptr) == 20.0);
}

TEST_CASE("parse failures report the offending line and leave no handle") {
  bn_config* cfg = reinterpret_cast<bn_config*>(0x1);
  cfg = nullptr;
  CHECK(bn_config_parse_text("n_t: 8\nwhatever: 1\n", &cfg) == BN_EPARSE);
  CHECK(cfg == nullptr);
  CHECK(std::string(bn_last_error()).find("line 2") != std::string::npos);

  CHECK(bn_config_parse_text("n_t: 8\nk: 4\n", &cfg) == BN_EINVAL);  // missing p_max_db
  CHECK(cfg == nullptr);

  CHECK(bn_config_parse_file("/nonexistent/nowhere.cfg", &cfg) == BN_EIO);
  CHECK(cfg == nullptr);
}

TEST_CASE("NULL arguments are rejected, never dereferenced") {
  bn_config* out = nullptr;
  CHECK(bn_config_parse_text(nullptr, &out) == BN_EINVAL);
  CHECK(std::string(bn_last_error()).find("text") != std::string::npos);
  CHECK(bn_config_parse_text(kConfigText, nullptr) == BN_EINVAL);
  CHECK(bn_config_set_seed(nullptr, 1) == BN_EINVAL);

  CHECK(bn_config_num_antennas(nullptr) == 0);
  CHECK(bn_config_num_ues(nullptr) == 0);
  CHECK(bn_config_snr_db(nullptr) == 0.0);
  CHECK(bn_config_seed(nullptr) == 0);

  bn_scenario* sc = nullptr;
  CHECK(bn_scenario_build(nullptr, &sc) == BN_EINVAL);
  CHECK(bn_scenario_num_ues(nullptr) == 0);
  CHECK(bn_scenario_num_clusters(nullptr) == 0);

  CHECK(bn_result_weighted_sum_rate(nullptr) == 0.0);
  CHECK(bn_result_trace_len(nullptr) == 0);

  // Frees tolerate NULL like free(3).
  bn_config_free(nullptr);
  bn_scenario_free(nullptr);
  bn_result_free(nullptr);
  bn_string_free(nullptr);
}

TEST_CASE("scenarios expose the drop's shape") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  CHECK(bn_scenario_num_ues(sc.ptr) == 6);
  CHECK(bn_scenario_num_clusters(sc.ptr) >= 1);
  CHECK(bn_scenario_num_clusters(sc.ptr) <= 6);
}

TEST_CASE("solver runs populate every result accessor") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  ResultHandle res(cfg.ptr, sc.ptr, "alg2");

  CHECK(bn_result_weighted_sum_rate(res.ptr) > 0.0);
  CHECK(bn_result_sum_rate_stderr(res.ptr) > 0.0);
  CHECK(bn_result_upper_bound(res.ptr) > 0.0);
  CHECK(bn_result_outer_iters(res.ptr) >= 1);
  CHECK(bn_result_converged(res.ptr) == 1);
  CHECK(bn_result_wall_time_ms(res.ptr) == 0.0);
  REQUIRE(bn_result_num_ues(res.ptr) == 6);

  double total = 0.0;
  for (int u = 0; u < 6; ++u) {
    const double r = bn_result_ue_rate(res.ptr, u);
    CHECK(std::isfinite(r));
    CHECK(r >= 0.0);
    total += r;
  }
  CHECK(total > 0.0);
  CHECK(std::isnan(bn_result_ue_rate(res.ptr, -1)));
  CHECK(std::isnan(bn_result_ue_rate(res.ptr, 6)));

  const int len = bn_result_trace_len(res.ptr);
  REQUIRE(len == bn_result_outer_iters(res.ptr));
  double prev = 0.0;
  for (int i = 0; i < len; ++i) {
    const double s = bn_result_trace_surrogate(res.ptr, i);
    CHECK(std::isfinite(s));
    if (i > 0) CHECK(s <= prev + 1e-9 * std::abs(prev));
    prev = s;
    const double usage = bn_result_trace_budget_usage(res.ptr, i);
    CHECK(usage >= 0.0);
    CHECK(usage <= 1.0 + 1e-9);
  }
  CHECK(std::isnan(bn_result_trace_surrogate(res.ptr, len)));
  CHECK(std::isnan(bn_result_trace_budget_usage(res.ptr, -1)));
}

TEST_CASE("baseline runs report zero iterations and empty traces") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  ResultHandle res(cfg.ptr, sc.ptr, "mf");
  CHECK(bn_result_outer_iters(res.ptr) == 0);
  CHECK(bn_result_converged(res.ptr) == 1);
  CHECK(bn_result_trace_len(res.ptr) == 0);
}

TEST_CASE("timing is opt-in") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  ResultHandle timed(cfg.ptr, sc.ptr, "alg1", /*timing=*/1);
  CHECK(bn_result_wall_time_ms(timed.ptr) > 0.0);
}

TEST_CASE("runs are bit-reproducible across calls and thread counts") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  bn_result* a = nullptr;
  bn_result* b = nullptr;
  REQUIRE(bn_run(cfg.ptr, sc.ptr, "alg3", 1, 0, &a) == BN_OK);
  REQUIRE(bn_run(cfg.ptr, sc.ptr, "alg3", 4, 0, &b) == BN_OK);
  CHECK(bn_result_weighted_sum_rate(a) == bn_result_weighted_sum_rate(b));
  CHECK(bn_result_upper_bound(a) == bn_result_upper_bound(b));
  for (int u = 0; u < bn_result_num_ues(a); ++u)
    CHECK(bn_result_ue_rate(a, u) == bn_result_ue_rate(b, u));
  bn_result_free(a);
  bn_result_free(b);
}

TEST_CASE("run rejects bad algorithms and thread counts") {
  ConfigHandle cfg(kConfigText);
  ScenarioHandle sc(cfg.ptr);
  bn_result* res = nullptr;
  CHECK(bn_run(cfg.ptr, sc.ptr, "alg9", 1, 0, &res) == BN_EINVAL);
  CHECK(res == nullptr);
  CHECK(bn_run(cfg.ptr, sc.ptr, "alg1", 0, 0, &res) == BN_EINVAL);
  CHECK(res == nullptr);
  CHECK(bn_run(cfg.ptr, sc.ptr, nullptr, 1, 0, &res) == BN_EINVAL);
}

TEST_CASE("sweep tables come back as stable CSV strings") {
  ConfigHandle cfg(kConfigText);
  const double values[] = {0.0, 10.0};
  const char* algos[] = {"mf", "alg3"};

  char* csv = nullptr;
  REQUIRE(bn_sweep_csv(cfg.ptr, "snr_db", values, 2, algos, 2, 1, 0, &csv) == BN_OK);
  REQUIRE(csv != nullptr);
  const std::string first(csv);
  CHECK(first.rfind("algorithm,axis_name,axis_value,", 0) == 0);
  // header + 2 algorithms x 2 values
  CHECK(std::count(first.begin(), first.end(), '\n') == 5);
  bn_string_free(csv);

  csv = nullptr;
  REQUIRE(bn_sweep_csv(cfg.ptr, "snr_db", values, 2, algos, 2, 1, 0, &csv) == BN_OK);
  CHECK(std::string(csv) == first);
  bn_string_free(csv);

  csv = nullptr;
  CHECK(bn_sweep_csv(cfg.ptr, "power", values, 2, algos, 2, 1, 0, &csv) == BN_EINVAL);
  CHECK(bn_sweep_csv(cfg.ptr, "snr_db", nullptr, 2, algos, 2, 1, 0, &csv) == BN_EINVAL);
  CHECK(bn_sweep_csv(cfg.ptr, "snr_db", values, 0, algos, 2, 1, 0, &csv) == BN_EINVAL);
  const char* bad_algos[] = {"mf", "alg9"};
  CHECK(bn_sweep_csv(cfg.ptr, "snr_db", values, 2, bad_algos, 2, 1, 0, &csv) == BN_EINVAL);
  CHECK(csv == nullptr);
}

TEST_CASE("trace tables cover solvers only") {
  ConfigHandle cfg(kConfigText);
  char* csv = nullptr;
  REQUIRE(bn_trace_csv(cfg.ptr, "alg1", &csv) == BN_OK);
  REQUIRE(csv != nullptr);
  CHECK(std::string(csv).rfind("iteration,surrogate,budget_usage\n", 0) == 0);
  bn_string_free(csv);

  csv = nullptr;
  CHECK(bn_trace_csv(cfg.ptr, "tdma", &csv) == BN_EINVAL);
  CHECK(csv == nullptr);
}
