// SPDX-License-Identifier: Apache-2.0
//
// Rate evaluation for a beam design: instantaneous and ergodic weighted sum
// rates, the closed-form upper bound, its interference-limited saturation,
// and the MMSE receiver identities used by the solvers.

#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "core/clustering.hpp"

namespace beamnoma {

// A complete transmit design: which base beams each UE slot uses and with how
// much power.  Rows follow the scenario's slot order, columns are base beams.
struct BeamDesign {
  arma::Mat<arma::u8> selection;  // num_slots x num_beams, entries in {0,1}
  arma::mat powers;               // num_slots x num_beams, >= 0
  double power_budget = 0.0;      // P_max

  double total_selected_power() const;
  // Throws std::invalid_argument when shapes disagree, powers are negative,
  // or the selected power exceeds the budget beyond a 1e-6 relative slack.
  void validate(const ClusteredScenario& scenario) const;
};

// Aggregated evaluation result.
struct RateReport {
  std::vector<double> per_ue_rates;  // indexed by UE id, bits/s/Hz
  double weighted_sum_rate = 0.0;
  double sum_rate_stderr = 0.0;      // Monte Carlo standard error of the weighted sum
  double upper_bound = 0.0;
  int num_realizations = 0;
  std::uint64_t rng_seed = 0;
};

// Whether receivers cancel same-cluster interference from later decoding
// positions (the default) or treat every other transmission as noise.
enum class Interference { sic, full };

// Beam-domain effective channels for one fading realization: column u holds
// sqrt(beam_gains of UE u) .* fading of UE u, which by the basis' unitarity
// carries the same information as the antenna-domain channel.
struct BeamDomainChannels {
  arma::cx_mat e;  // num_beams x num_ues
};

// Beam-domain channels from per-UE fading draws.
BeamDomainChannels beam_domain_channels(const ClusteredScenario& scenario,
                                        const std::vector<SmallScaleFading>& fading_by_ue);

// Achievable rate of every UE for one realization, indexed by UE id.
std::vector<double> per_ue_instantaneous_rates(const BeamDesign& design,
                                               const ClusteredScenario& scenario,
                                               const BeamDomainChannels& channels,
                                               Interference mode = Interference::sic);

// Achievable rate of one UE for one realization, from beam-domain channels.
double instantaneous_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                          const BeamDomainChannels& channels, int ue,
                          Interference mode = Interference::sic);

// Same, from antenna-domain channel vectors (indexed by UE id); they are
// rotated into the beamspace through the basis before evaluation.
double instantaneous_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                          const std::vector<ChannelVector>& channels_by_ue,
                          const BeamspaceBasis& basis, int ue,
                          Interference mode = Interference::sic);

// Monte Carlo estimate of the weighted sum of ergodic rates.  Fading for
// (realization r, UE u) comes from its own seeded stream, so the result is a
// pure function of (design, scenario, num_realizations, master_seed) no
// matter how many threads share the loop.  The report also carries the
// closed-form upper bound for the same design.
RateReport ergodic_weighted_sum_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                                     int num_realizations, std::uint64_t master_seed,
                                     int threads = 1, Interference mode = Interference::sic);

// Closed-form upper bound on the weighted sum of ergodic rates: the design is
// scored as if each base beam were an orthogonal resource block with the
// statistical gains in place of the fading.
double upper_bound(const BeamDesign& design, const ClusteredScenario& scenario,
                   Interference mode = Interference::sic);

// Interference-limited limit of the upper bound for a fixed power-fraction
// pattern: noise is dropped, so the total power cancels.  UEs whose every
// selected beam has zero interference grow without bound and are flagged
// instead of folded into the finite part.
struct SaturatedBound {
  double finite_part = 0.0;
  std::vector<int> unbounded_ues;  // UE ids with at least one zero-interference term
  bool bounded() const { return unbounded_ues.empty(); }
};

SaturatedBound saturated_bound(const arma::mat& fractions, const arma::Mat<arma::u8>& selection,
                               const ClusteredScenario& scenario);

// MMSE receiver for a scalar link with signal power p*eta, interference power
// interference*eta and unit noise.
struct MmseResult {
  double receiver = 0.0;  // v
  double mse = 0.0;       // in (0, 1]
};

// Phi = eta*(interference + p) + 1; v = sqrt(eta*p)/Phi; mse = 1 - eta*p/Phi.
// The minimum MSE obeys 1/mse = 1 + SINR.
MmseResult mmse_receiver_and_mse(double p, double eta, double interference_power);

// Per-beam SINR of one UE's slot on one base beam: p*eta over (inter-cluster
// + lower-position intra-cluster selected power)*eta + 1; zero when the beam
// is not selected.  Summing log2(1+.) over beams reproduces the UE's upper
// bound contribution.
double equivalent_beam_sinr(const BeamDesign& design, const ClusteredScenario& scenario, int ue,
                            int beam_index);

}  // namespace beamnoma
