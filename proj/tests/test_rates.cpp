// SPDX-License-Identifier: Apache-2.0
//
// Rate-evaluation tests: hand-computed instantaneous rates on a tiny
// scenario, the receiver identity, the closed-form bound against literal
// arithmetic, its per-beam decomposition, the Monte Carlo estimator's
// determinism and thread invariance, and the bound/estimate inequality over
// random feasible designs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "core/rates.hpp"
#include "core/rng.hpp"

using namespace beamnoma;

namespace {

UEProfile make_profile(int id, double aod, std::initializer_list<double> gains,
                       double weight = 1.0) {
  UEProfile p;
  p.id = id;
  p.aod = aod;
  p.beam_gains = arma::vec(gains);
  p.weight = weight;
  return p;
}

// Two beams, three UEs, two sectors.  Cluster 0 holds UE0 (gain sum 2.5) then
// UE1 (1.25); cluster 1 holds UE2 alone.
ClusteredScenario tiny_scenario(double budget = 10.0) {
  std::vector<UEProfile> profiles = {
      make_profile(0, -0.5, {2.0, 0.5}),
      make_profile(1, -0.2, {1.0, 0.25}),
      make_profile(2, 0.5, {0.5, 3.0}),
  };
  return build_clustered_scenario(profiles, 2, budget, 2);
}

// Slot 0 sends 3 on beam 0, slot 1 sends 2 on beam 0, slot 2 sends 4 on
// beam 1; total 9 of budget 10.
BeamDesign tiny_design() {
  BeamDesign d;
  d.selection = {{1, 0}, {1, 0}, {0, 1}};
  d.powers = {{3.0, 0.0}, {2.0, 0.0}, {0.0, 4.0}};
  d.power_budget = 10.0;
  return d;
}

// A moderately sized generated scenario for statistical checks.
ClusteredScenario generated_scenario(int n_t, int k, double budget, std::uint64_t seed) {
  ArrayConfig array;
  array.num_antennas = n_t;
  const ChannelGenParams params;
  std::vector<UEProfile> profiles;
  for (int u = 0; u < k; ++u) {
    StreamRng rng(seed, rng_domain::kUeDrop, static_cast<std::uint64_t>(u));
    profiles.push_back(generate_ue_profile(rng, params, array, u).first);
  }
  return build_clustered_scenario(profiles, n_t, budget, n_t);
}

// Random feasible design: Bernoulli selection, uniform powers scaled to a
// random fraction of the budget.
BeamDesign random_design(StreamRng& rng, const ClusteredScenario& sc) {
  const int slots = sc.num_slots();
  const int beams = sc.num_beams;
  BeamDesign d;
  d.selection.zeros(slots, beams);
  d.powers.zeros(slots, beams);
  d.power_budget = sc.power_budget;
  double total = 0.0;
  for (int t = 0; t < slots; ++t)
    for (int c = 0; c < beams; ++c)
      if (rng.uniform() < 0.5) {
        d.selection(t, c) = 1;
        d.powers(t, c) = rng.uniform();
        total += d.powers(t, c);
      }
  if (total == 0.0) {
    d.selection(0, 0) = 1;
    d.powers(0, 0) = total = 1.0;
  }
  const double target = sc.power_budget * (0.3 + 0.7 * rng.uniform());
  d.powers *= target / total;
  return d;
}

}  // namespace

TEST_CASE("design validation enforces shape, range and budget") {
  const ClusteredScenario sc = tiny_scenario();
  BeamDesign d = tiny_design();
  CHECK_NOTHROW(d.validate(sc));
  CHECK(d.total_selected_power() == doctest::Approx(9.0));

  BeamDesign wrong_shape = d;
  wrong_shape.powers = arma::mat(2, 2, arma::fill::zeros);
  CHECK_THROWS_AS(wrong_shape.validate(sc), std::invalid_argument);

  BeamDesign bad_flag = d;
  bad_flag.selection(0, 0) = 2;
  CHECK_THROWS_AS(bad_flag.validate(sc), std::invalid_argument);

  BeamDesign negative = d;
  negative.powers(0, 0) = -1.0;
  CHECK_THROWS_AS(negative.validate(sc), std::invalid_argument);

  BeamDesign over = d;
  over.powers(0, 0) = 4.1;  // total 10.1 > 10 * (1 + 1e-6)
  CHECK_THROWS_AS(over.validate(sc), std::invalid_argument);

  BeamDesign exact = d;
  exact.powers(0, 0) = 4.0;  // exactly the budget
  CHECK_NOTHROW(exact.validate(sc));

  BeamDesign no_budget = d;
  no_budget.power_budget = 0.0;
  CHECK_THROWS_AS(no_budget.validate(sc), std::invalid_argument);

  // Unselected powers do not count against the budget.
  BeamDesign unselected = d;
  unselected.powers(0, 1) = 100.0;  // selection(0,1) == 0
  CHECK(unselected.total_selected_power() == doctest::Approx(9.0));
  CHECK_NOTHROW(unselected.validate(sc));
}

TEST_CASE("receiver, error and the mse-sinr identity") {
  // Hand case: p = 2, eta = 0.5, I = 3 gives Phi = 3.5, v = 1/3.5,
  // mse = 2.5/3.5, and SINR = 0.4 so 1/mse = 1.4.
  const MmseResult r = mmse_receiver_and_mse(2.0, 0.5, 3.0);
  CHECK(r.receiver == doctest::Approx(1.0 / 3.5).epsilon(1e-14));
  CHECK(r.mse == doctest::Approx(2.5 / 3.5).epsilon(1e-14));

  StreamRng rng(3, rng_domain::kGeneric, 0);
  for (int i = 0; i < 500; ++i) {
    const double p = 10.0 * rng.uniform();
    const double eta = 5.0 * rng.uniform();
    const double interference = 20.0 * rng.uniform();
    const MmseResult m = mmse_receiver_and_mse(p, eta, interference);
    CHECK(m.mse > 0.0);
    CHECK(m.mse <= 1.0);
    const double sinr = p * eta / (interference * eta + 1.0);
    CHECK(std::abs(1.0 / m.mse - (1.0 + sinr)) <= 1e-12 * (1.0 + sinr));
  }

  CHECK_THROWS_AS(mmse_receiver_and_mse(-1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mmse_receiver_and_mse(1.0, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mmse_receiver_and_mse(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("instantaneous rates match the hand-derived expressions") {
  const ClusteredScenario sc = tiny_scenario();
  const BeamDesign d = tiny_design();

  BeamDomainChannels ch;
  ch.e.set_size(2, 3);
  ch.e(0, 0) = {1.0, 1.0};   // |.|^2 = 2
  ch.e(1, 0) = {2.0, -1.0};  // 5
  ch.e(0, 1) = {0.5, 0.0};   // 0.25
  ch.e(1, 1) = {0.0, 1.0};   // 1
  ch.e(0, 2) = {-0.3, 0.4};  // 0.25
  ch.e(1, 2) = {0.8, 0.0};   // 0.64

  SUBCASE("single-beam slots, successive cancellation") {
    // UE0 decodes first: its own 3*2 over the other cluster's 4*5 plus noise.
    // UE1 keeps UE0's power: 2*0.25 over 4*1 + 3*0.25 + 1.
    // UE2 is alone in its cluster: 4*0.64 over (3+2)*0.25 + 1.
    const std::vector<double> r = per_ue_instantaneous_rates(d, sc, ch);
    CHECK(r[0] == doctest::Approx(std::log2(1.0 + 6.0 / 21.0)).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(std::log2(1.0 + 0.5 / 5.75)).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(std::log2(1.0 + 2.56 / 2.25)).epsilon(1e-12));

    // The per-UE accessors agree with the batch evaluation.
    for (int u = 0; u < 3; ++u)
      CHECK(instantaneous_rate(d, sc, ch, u) == doctest::Approx(r[u]).epsilon(1e-14));
  }

  SUBCASE("treating everyone as noise lowers only the early decoder") {
    const std::vector<double> sic = per_ue_instantaneous_rates(d, sc, ch, Interference::sic);
    const std::vector<double> full = per_ue_instantaneous_rates(d, sc, ch, Interference::full);
    // UE0 now also hears UE1's 2*2: denominator 21 + 4.
    CHECK(full[0] == doctest::Approx(std::log2(1.0 + 6.0 / 25.0)).epsilon(1e-12));
    CHECK(full[0] < sic[0]);
    // The last decoding position and singleton clusters are unchanged.
    CHECK(full[1] == doctest::Approx(sic[1]).epsilon(1e-14));
    CHECK(full[2] == doctest::Approx(sic[2]).epsilon(1e-14));
  }

  SUBCASE("multi-beam slots combine amplitudes coherently") {
    BeamDesign multi = d;
    multi.selection(0, 1) = 1;
    multi.powers(0, 1) = 1.0;  // slot 0 now sends sqrt(3) and 1 on the beams
    const std::vector<double> r = per_ue_instantaneous_rates(multi, sc, ch);
    auto p2 = [&](int t, int u) {
      std::complex<double> z = 0.0;
      for (int c = 0; c < 2; ++c)
        z += std::conj(ch.e(c, u)) * std::sqrt(multi.selection(t, c) ? multi.powers(t, c) : 0.0);
      return std::norm(z);
    };
    const double r0 = std::log2(1.0 + p2(0, 0) / (p2(2, 0) + 1.0));
    const double r1 = std::log2(1.0 + p2(1, 1) / (p2(2, 1) + p2(0, 1) + 1.0));
    const double r2 = std::log2(1.0 + p2(2, 2) / (p2(0, 2) + p2(1, 2) + 1.0));
    CHECK(r[0] == doctest::Approx(r0).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(r1).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(r2).epsilon(1e-12));
  }

  SUBCASE("out-of-range queries are rejected") {
    CHECK_THROWS_AS(instantaneous_rate(d, sc, ch, 3), std::invalid_argument);
    CHECK_THROWS_AS(instantaneous_rate(d, sc, ch, -1), std::invalid_argument);
  }
}

TEST_CASE("antenna-domain evaluation matches the beam-domain one") {
  const int n_t = 8;
  const ClusteredScenario sc = generated_scenario(n_t, 5, 10.0, 11);
  ArrayConfig array;
  array.num_antennas = n_t;
  const BeamspaceBasis basis = beamspace_basis(array);

  StreamRng rng(12, rng_domain::kGeneric, 0);
  const BeamDesign d = random_design(rng, sc);

  std::vector<SmallScaleFading> fading;
  std::vector<ChannelVector> antenna;
  for (int u = 0; u < sc.num_ues(); ++u) {
    StreamRng fr(13, rng_domain::kFading, fading_stream_index(0, u));
    fading.push_back(draw_fading(fr, n_t));
    antenna.push_back(channel_vector(sc.profiles[u], fading.back(), basis));
  }
  const BeamDomainChannels bd = beam_domain_channels(sc, fading);
  for (int u = 0; u < sc.num_ues(); ++u) {
    const double via_beam = instantaneous_rate(d, sc, bd, u);
    const double via_antenna = instantaneous_rate(d, sc, antenna, basis, u);
    CHECK(std::abs(via_beam - via_antenna) <= 1e-10 * std::max(1.0, via_beam));
  }
}

TEST_CASE("the closed-form bound matches literal arithmetic") {
  const ClusteredScenario sc = tiny_scenario();
  const BeamDesign d = tiny_design();
  // UE0: own 3 on beam 0, no interference at decoding position 0 and no
  // other-cluster power on beam 0 -> log2(1 + 3*2).
  // UE1: own 2 on beam 0 behind UE0's 3 -> log2(1 + 2*1/(3*1 + 1)).
  // UE2: own 4 on beam 1, alone there -> log2(1 + 4*3).
  const double expected = std::log2(7.0) + std::log2(1.5) + std::log2(13.0);
  CHECK(upper_bound(d, sc) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("weights scale each user's bound contribution") {
  std::vector<UEProfile> profiles = {
      make_profile(0, -0.5, {2.0, 0.5}, 2.0),
      make_profile(1, -0.2, {1.0, 0.25}, 1.0),
      make_profile(2, 0.5, {0.5, 3.0}, 3.0),
  };
  const ClusteredScenario sc = build_clustered_scenario(profiles, 2, 10.0, 2);
  const BeamDesign d = tiny_design();
  const double expected = 2.0 * std::log2(7.0) + std::log2(1.5) + 3.0 * std::log2(13.0);
  CHECK(upper_bound(d, sc) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("per-beam terms recompose into the bound exactly") {
  const ClusteredScenario sc = generated_scenario(8, 6, 10.0, 17);
  StreamRng rng(18, rng_domain::kGeneric, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const BeamDesign d = random_design(rng, sc);
    double recomposed = 0.0;
    for (int u = 0; u < sc.num_ues(); ++u) {
      for (int c = 0; c < sc.num_beams; ++c) {
        const double sinr = equivalent_beam_sinr(d, sc, u, c);
        if (sinr > 0.0) recomposed += sc.profiles[u].weight * std::log2(1.0 + sinr);
      }
    }
    const double bound = upper_bound(d, sc);
    CHECK(std::abs(recomposed - bound) <= 1e-10 * std::max(1.0, bound));
  }
  CHECK_THROWS_AS(equivalent_beam_sinr(random_design(rng, sc), sc, 99, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(equivalent_beam_sinr(random_design(rng, sc), sc, 0, 99),
                  std::invalid_argument);
}

TEST_CASE("the bound dominates the Monte Carlo estimate on random designs") {
  const ClusteredScenario sc = generated_scenario(8, 6, 10.0, 7);
  StreamRng rng(8, rng_domain::kGeneric, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const BeamDesign d = random_design(rng, sc);
    const RateReport report = ergodic_weighted_sum_rate(d, sc, 300, 1000 + trial, 4);
    CHECK(report.weighted_sum_rate <= report.upper_bound + 3.0 * report.sum_rate_stderr);
  }
}

TEST_CASE("the ergodic estimator is deterministic and thread invariant") {
  const ClusteredScenario sc = generated_scenario(8, 6, 10.0, 23);
  StreamRng rng(24, rng_domain::kGeneric, 0);
  const BeamDesign d = random_design(rng, sc);

  const RateReport a = ergodic_weighted_sum_rate(d, sc, 200, 5, 1);
  const RateReport b = ergodic_weighted_sum_rate(d, sc, 200, 5, 1);
  const RateReport c = ergodic_weighted_sum_rate(d, sc, 200, 5, 4);
  const RateReport e = ergodic_weighted_sum_rate(d, sc, 200, 5, 7);

  CHECK(a.weighted_sum_rate == b.weighted_sum_rate);
  CHECK(a.sum_rate_stderr == b.sum_rate_stderr);
  CHECK(a.weighted_sum_rate == c.weighted_sum_rate);
  CHECK(a.sum_rate_stderr == c.sum_rate_stderr);
  CHECK(a.weighted_sum_rate == e.weighted_sum_rate);
  for (int u = 0; u < sc.num_ues(); ++u) {
    CHECK(a.per_ue_rates[u] == c.per_ue_rates[u]);
    CHECK(a.per_ue_rates[u] == e.per_ue_rates[u]);
  }

  // A different seed gives a different estimate (same design).
  const RateReport f = ergodic_weighted_sum_rate(d, sc, 200, 6, 4);
  CHECK(f.weighted_sum_rate != a.weighted_sum_rate);

  // Report bookkeeping.
  CHECK(a.num_realizations == 200);
  CHECK(a.rng_seed == 5);
  CHECK(a.sum_rate_stderr > 0.0);
  CHECK(a.upper_bound == upper_bound(d, sc));
  double weighted = 0.0;
  for (int u = 0; u < sc.num_ues(); ++u)
    weighted += sc.profiles[u].weight * a.per_ue_rates[u];
  CHECK(a.weighted_sum_rate == doctest::Approx(weighted).epsilon(1e-10));

  CHECK_THROWS_AS(ergodic_weighted_sum_rate(d, sc, 0, 5), std::invalid_argument);
}

TEST_CASE("the saturated bound is the infinite-power limit") {
  const ClusteredScenario sc = tiny_scenario(1e9);

  SUBCASE("cluster-exclusive beams leave the early decoders unbounded") {
    arma::Mat<arma::u8> sel = {{1, 0}, {1, 0}, {0, 1}};
    arma::mat frac = {{0.3, 0.0}, {0.2, 0.0}, {0.0, 0.5}};
    const SaturatedBound sb = saturated_bound(frac, sel, sc);
    CHECK_FALSE(sb.bounded());
    CHECK(sb.unbounded_ues == std::vector<int>{0, 2});
    // Only UE1 keeps a finite term: its own 0.2 behind UE0's 0.3.
    CHECK(sb.finite_part == doctest::Approx(std::log2(1.0 + 0.2 / 0.3)).epsilon(1e-12));
  }

  SUBCASE("a shared beam keeps every term finite and matches huge power") {
    arma::Mat<arma::u8> sel = {{1, 0}, {1, 0}, {1, 0}};
    arma::mat frac = {{0.3, 0.0}, {0.2, 0.0}, {0.5, 0.0}};
    const SaturatedBound sb = saturated_bound(frac, sel, sc);
    CHECK(sb.bounded());
    const double expected =
        std::log2(1.0 + 0.3 / 0.5) + std::log2(1.0 + 0.2 / 0.8) + std::log2(1.0 + 0.5 / 0.5);
    CHECK(sb.finite_part == doctest::Approx(expected).epsilon(1e-12));

    BeamDesign d;
    d.selection = sel;
    d.powers = frac * 1e9;
    d.power_budget = 1e9;
    CHECK(upper_bound(d, sc) == doctest::Approx(sb.finite_part).epsilon(1e-6));
  }

  SUBCASE("inputs are validated") {
    arma::Mat<arma::u8> sel(2, 2, arma::fill::ones);
    arma::mat frac(3, 2, arma::fill::zeros);
    CHECK_THROWS_AS(saturated_bound(frac, sel, sc), std::invalid_argument);
    arma::Mat<arma::u8> sel3(3, 2, arma::fill::ones);
    arma::mat bad(3, 2, arma::fill::zeros);
    bad(0, 0) = -0.1;
    CHECK_THROWS_AS(saturated_bound(bad, sel3, sc), std::invalid_argument);
  }
}
