// SPDX-License-Identifier: Apache-2.0

#include "core/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace beamnoma {

namespace {

// log2(1 + x) guarding the x = 0 fast path.
inline double rate_of(double sinr) { return sinr > 0.0 ? std::log2(1.0 + sinr) : 0.0; }

// Selected power matrix s .* p.
arma::mat selected_powers(const BeamDesign& design) {
  arma::mat sp = design.powers;
  for (arma::uword i = 0; i < sp.n_elem; ++i)
    if (!design.selection[i]) sp[i] = 0.0;
  return sp;
}

// Per-UE rates for one realization given |W|^2, where W(t, u) is the complex
// amplitude UE u receives from slot t's transmit beam.
std::vector<double> rates_from_amplitudes(const arma::mat& p2, const ClusteredScenario& sc,
                                          Interference mode) {
  const int num_slots = sc.num_slots();
  std::vector<double> rates(num_slots, 0.0);
  for (int u = 0; u < num_slots; ++u) {
    const int slot = sc.ue_slot[u];
    const int m = sc.slot_cluster[slot];
    const int pos = sc.slot_position[slot];
    const int start = sc.cluster_start[m];
    const int size = sc.cluster_size(m);
    double total = 0.0;
    for (int t = 0; t < num_slots; ++t) total += p2(t, u);
    double cluster = 0.0;
    for (int i = 0; i < size; ++i) cluster += p2(start + i, u);
    double intra = 0.0;
    if (mode == Interference::sic) {
      for (int i = 0; i < pos; ++i) intra += p2(start + i, u);
    } else {
      intra = cluster - p2(slot, u);
    }
    const double desired = p2(slot, u);
    const double denom = (total - cluster) + intra + 1.0;
    rates[u] = rate_of(desired / denom);
  }
  return rates;
}

}  // namespace

double BeamDesign::total_selected_power() const {
  double total = 0.0;
  for (arma::uword i = 0; i < powers.n_elem; ++i)
    if (selection[i]) total += powers[i];
  return total;
}

void BeamDesign::validate(const ClusteredScenario& scenario) const {
  const arma::uword slots = static_cast<arma::uword>(scenario.num_slots());
  const arma::uword beams = static_cast<arma::uword>(scenario.num_beams);
  if (selection.n_rows != slots || selection.n_cols != beams || powers.n_rows != slots ||
      powers.n_cols != beams)
    throw std::invalid_argument("BeamDesign: shape mismatch with scenario");
  if (!(power_budget > 0.0)) throw std::invalid_argument("BeamDesign: power_budget must be > 0");
  for (arma::uword i = 0; i < selection.n_elem; ++i)
    if (selection[i] > 1) throw std::invalid_argument("BeamDesign: selection entries must be 0/1");
  for (arma::uword i = 0; i < powers.n_elem; ++i)
    if (!(powers[i] >= 0.0) || !std::isfinite(powers[i]))
      throw std::invalid_argument("BeamDesign: powers must be finite and >= 0");
  if (total_selected_power() > power_budget * (1.0 + 1e-6))
    throw std::invalid_argument("BeamDesign: selected power exceeds the budget");
}

BeamDomainChannels beam_domain_channels(const ClusteredScenario& scenario,
                                        const std::vector<SmallScaleFading>& fading_by_ue) {
  const int num_ues = scenario.num_ues();
  const int num_beams = scenario.num_beams;
  if (static_cast<int>(fading_by_ue.size()) != num_ues)
    throw std::invalid_argument("beam_domain_channels: one fading vector per UE required");
  BeamDomainChannels out;
  out.e.set_size(num_beams, num_ues);
  for (int u = 0; u < num_ues; ++u) {
    const arma::cx_vec& f = fading_by_ue[u].coeffs;
    if (f.n_elem != static_cast<arma::uword>(num_beams))
      throw std::invalid_argument("beam_domain_channels: fading length mismatch");
    const arma::vec& gains = scenario.profiles[u].beam_gains;
    for (int c = 0; c < num_beams; ++c) out.e(c, u) = std::sqrt(gains[c]) * f[c];
  }
  return out;
}

std::vector<double> per_ue_instantaneous_rates(const BeamDesign& design,
                                               const ClusteredScenario& scenario,
                                               const BeamDomainChannels& channels,
                                               Interference mode) {
  design.validate(scenario);
  const int num_slots = scenario.num_slots();
  const int num_beams = scenario.num_beams;
  if (channels.e.n_rows != static_cast<arma::uword>(num_beams) ||
      channels.e.n_cols != static_cast<arma::uword>(scenario.num_ues()))
    throw std::invalid_argument("per_ue_instantaneous_rates: channel shape mismatch");
  const arma::mat sp = selected_powers(design);
  arma::mat sqrtp = arma::sqrt(sp);
  // |W(t, u)|^2 with a fixed, thread-independent accumulation order.
  arma::mat p2(num_slots, num_slots);
  for (int u = 0; u < num_slots; ++u) {
    for (int t = 0; t < num_slots; ++t) {
      std::complex<double> z = 0.0;
      for (int c = 0; c < num_beams; ++c) z += std::conj(channels.e(c, u)) * sqrtp(t, c);
      p2(t, u) = std::norm(z);
    }
  }
  return rates_from_amplitudes(p2, scenario, mode);
}

double instantaneous_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                          const BeamDomainChannels& channels, int ue, Interference mode) {
  if (ue < 0 || ue >= scenario.num_ues())
    throw std::invalid_argument("instantaneous_rate: unknown UE id");
  return per_ue_instantaneous_rates(design, scenario, channels, mode)[ue];
}

double instantaneous_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                          const std::vector<ChannelVector>& channels_by_ue,
                          const BeamspaceBasis& basis, int ue, Interference mode) {
  const int num_ues = scenario.num_ues();
  const int num_beams = scenario.num_beams;
  if (static_cast<int>(channels_by_ue.size()) != num_ues)
    throw std::invalid_argument("instantaneous_rate: one channel per UE required");
  if (ue < 0 || ue >= num_ues) throw std::invalid_argument("instantaneous_rate: unknown UE id");
  BeamDomainChannels bd;
  bd.e.set_size(num_beams, num_ues);
  for (int u = 0; u < num_ues; ++u) {
    if (channels_by_ue[u].h.n_elem != static_cast<arma::uword>(num_beams))
      throw std::invalid_argument("instantaneous_rate: channel length mismatch");
    bd.e.col(u) = basis.basis.t() * channels_by_ue[u].h;
  }
  return instantaneous_rate(design, scenario, bd, ue, mode);
}

RateReport ergodic_weighted_sum_rate(const BeamDesign& design, const ClusteredScenario& scenario,
                                     int num_realizations, std::uint64_t master_seed, int threads,
                                     Interference mode) {
  if (num_realizations < 1)
    throw std::invalid_argument("ergodic_weighted_sum_rate: num_realizations must be >= 1");
  design.validate(scenario);
  const int num_ues = scenario.num_ues();
  const int num_beams = scenario.num_beams;
  const int num_slots = scenario.num_slots();
  const arma::mat sqrtp = arma::sqrt(selected_powers(design));

  // Per-realization per-UE rates; rows are filled independently and reduced
  // in index order afterwards, so the result does not depend on `threads`.
  arma::mat rates(num_realizations, num_ues);

  auto worker = [&](int first, int last) {
    BeamDomainChannels bd;
    bd.e.set_size(num_beams, num_ues);
    arma::mat p2(num_slots, num_ues);
    for (int r = first; r < last; ++r) {
      for (int u = 0; u < num_ues; ++u) {
        StreamRng rng(master_seed, rng_domain::kFading,
                      fading_stream_index(static_cast<std::uint64_t>(r), u));
        const arma::vec& gains = scenario.profiles[u].beam_gains;
        for (int c = 0; c < num_beams; ++c) bd.e(c, u) = std::sqrt(gains[c]) * rng.cgauss();
      }
      for (int u = 0; u < num_ues; ++u) {
        for (int t = 0; t < num_slots; ++t) {
          std::complex<double> z = 0.0;
          for (int c = 0; c < num_beams; ++c) z += std::conj(bd.e(c, u)) * sqrtp(t, c);
          p2(t, u) = std::norm(z);
        }
      }
      const std::vector<double> row = rates_from_amplitudes(p2, scenario, mode);
      for (int u = 0; u < num_ues; ++u) rates(r, u) = row[u];
    }
  };

  threads = std::max(1, std::min(threads, num_realizations));
  if (threads == 1) {
    worker(0, num_realizations);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (num_realizations + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int first = t * chunk;
      const int last = std::min(num_realizations, first + chunk);
      if (first < last) pool.emplace_back(worker, first, last);
    }
    for (std::thread& th : pool) th.join();
  }

  RateReport report;
  report.num_realizations = num_realizations;
  report.rng_seed = master_seed;
  report.per_ue_rates.assign(num_ues, 0.0);
  for (int u = 0; u < num_ues; ++u) {
    double acc = 0.0;
    for (int r = 0; r < num_realizations; ++r) acc += rates(r, u);
    report.per_ue_rates[u] = acc / num_realizations;
  }
  double mean = 0.0;
  arma::vec weighted(num_realizations);
  for (int r = 0; r < num_realizations; ++r) {
    double w = 0.0;
    for (int u = 0; u < num_ues; ++u) w += scenario.profiles[u].weight * rates(r, u);
    weighted[r] = w;
    mean += w;
  }
  mean /= num_realizations;
  report.weighted_sum_rate = mean;
  if (num_realizations > 1) {
    double ss = 0.0;
    for (int r = 0; r < num_realizations; ++r) {
      const double d = weighted[r] - mean;
      ss += d * d;
    }
    report.sum_rate_stderr =
        std::sqrt(ss / (static_cast<double>(num_realizations) * (num_realizations - 1)));
  }
  report.upper_bound = upper_bound(design, scenario, mode);
  return report;
}

double upper_bound(const BeamDesign& design, const ClusteredScenario& scenario,
                   Interference mode) {
  design.validate(scenario);
  const int num_beams = scenario.num_beams;
  const int num_clusters = scenario.num_clusters();
  const arma::mat sp = selected_powers(design);
  const arma::rowvec total = arma::sum(sp, 0);

  double bound = 0.0;
  for (int m = 0; m < num_clusters; ++m) {
    const int start = scenario.cluster_start[m];
    const int size = scenario.cluster_size(m);
    arma::rowvec cluster_total(num_beams, arma::fill::zeros);
    for (int i = 0; i < size; ++i) cluster_total += sp.row(start + i);
    arma::rowvec prefix(num_beams, arma::fill::zeros);  // positions before this one
    for (int i = 0; i < size; ++i) {
      const int slot = start + i;
      const UEProfile& prof = scenario.profiles[scenario.slot_ue[slot]];
      for (int c = 0; c < num_beams; ++c) {
        const double own = sp(slot, c);
        if (own > 0.0) {
          const double inter = total[c] - cluster_total[c];
          const double intra =
              mode == Interference::sic ? prefix[c] : cluster_total[c] - own;
          const double eta = prof.beam_gains[c];
          bound += prof.weight * rate_of(own * eta / ((inter + intra) * eta + 1.0));
        }
      }
      prefix += sp.row(slot);
    }
  }
  return bound;
}

SaturatedBound saturated_bound(const arma::mat& fractions, const arma::Mat<arma::u8>& selection,
                               const ClusteredScenario& scenario) {
  const int num_slots = scenario.num_slots();
  const int num_beams = scenario.num_beams;
  if (fractions.n_rows != static_cast<arma::uword>(num_slots) ||
      fractions.n_cols != static_cast<arma::uword>(num_beams) ||
      selection.n_rows != fractions.n_rows || selection.n_cols != fractions.n_cols)
    throw std::invalid_argument("saturated_bound: shape mismatch");
  for (arma::uword i = 0; i < fractions.n_elem; ++i)
    if (!(fractions[i] >= 0.0))
      throw std::invalid_argument("saturated_bound: fractions must be >= 0");

  arma::mat sf = fractions;
  for (arma::uword i = 0; i < sf.n_elem; ++i)
    if (!selection[i]) sf[i] = 0.0;
  const arma::rowvec total = arma::sum(sf, 0);

  SaturatedBound out;
  for (int m = 0; m < scenario.num_clusters(); ++m) {
    const int start = scenario.cluster_start[m];
    const int size = scenario.cluster_size(m);
    arma::rowvec cluster_total(num_beams, arma::fill::zeros);
    for (int i = 0; i < size; ++i) cluster_total += sf.row(start + i);
    arma::rowvec prefix(num_beams, arma::fill::zeros);
    for (int i = 0; i < size; ++i) {
      const int slot = start + i;
      const int ue = scenario.slot_ue[slot];
      const double weight = scenario.profiles[ue].weight;
      bool unbounded = false;
      for (int c = 0; c < num_beams; ++c) {
        const double own = sf(slot, c);
        if (own <= 0.0) continue;
        const double denom = (total[c] - cluster_total[c]) + prefix[c];
        if (denom <= 0.0) {
          unbounded = true;  // noise was dropped, so this term diverges
        } else {
          out.finite_part += weight * rate_of(own / denom);
        }
      }
      if (unbounded) out.unbounded_ues.push_back(ue);
      prefix += sf.row(slot);
    }
  }
  return out;
}

MmseResult mmse_receiver_and_mse(double p, double eta, double interference_power) {
  if (!(p >= 0.0) || !(eta >= 0.0) || !(interference_power >= 0.0))
    throw std::invalid_argument("mmse_receiver_and_mse: inputs must be >= 0");
  const double phi = eta * (interference_power + p) + 1.0;
  MmseResult r;
  r.receiver = std::sqrt(eta * p) / phi;
  r.mse = 1.0 - eta * p / phi;
  return r;
}

double equivalent_beam_sinr(const BeamDesign& design, const ClusteredScenario& scenario, int ue,
                            int beam_index) {
  if (ue < 0 || ue >= scenario.num_ues())
    throw std::invalid_argument("equivalent_beam_sinr: unknown UE id");
  if (beam_index < 0 || beam_index >= scenario.num_beams)
    throw std::invalid_argument("equivalent_beam_sinr: beam index out of range");
  const int slot = scenario.ue_slot[ue];
  if (!design.selection(slot, beam_index)) return 0.0;
  const double own = design.powers(slot, beam_index);
  const int m = scenario.slot_cluster[slot];
  const int pos = scenario.slot_position[slot];
  const int start = scenario.cluster_start[m];
  double inter = 0.0;
  for (int t = 0; t < scenario.num_slots(); ++t)
    if (scenario.slot_cluster[t] != m && design.selection(t, beam_index))
      inter += design.powers(t, beam_index);
  double intra = 0.0;
  for (int i = 0; i < pos; ++i)
    if (design.selection(start + i, beam_index)) intra += design.powers(start + i, beam_index);
  const double eta = scenario.profiles[ue].beam_gains[beam_index];
  return own * eta / ((inter + intra) * eta + 1.0);
}

}  // namespace beamnoma
