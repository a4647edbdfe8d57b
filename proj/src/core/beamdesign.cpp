// SPDX-License-Identifier: Apache-2.0

#include "core/beamdesign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace beamnoma {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// ------------------------------------------------------------------ search

// One-dimensional search for a constraint multiplier against a residual that
// decreases monotonically in it: gradient ascent whose step halves when the
// residual changes sign and grows while the sign persists, safeguarded by the
// bracket those sign changes reveal (midpoint fallback).  Once a bracket
// exists the iteration contracts like bisection, so the root is located to
// near machine precision within the iteration cap.
class MultiplierSearch {
 public:
  MultiplierSearch(double init, double step, double floor)
      : value_(std::max(init, floor)), step_(step), floor_(floor) {}

  double value() const { return value_; }
  bool at_floor() const { return value_ <= floor_; }

  void observe(double residual) {
    const int sign = residual > 0.0 ? 1 : -1;
    if (sign > 0) {
      lo_ = value_;
      has_lo_ = true;
    } else {
      hi_ = value_;
      has_hi_ = true;
    }
    if (last_sign_ != 0) {
      if (sign == last_sign_) {
        if (++run_ >= 3) {
          step_ *= 2.0;
          run_ = 0;
        }
      } else {
        step_ *= 0.5;
        run_ = 0;
      }
    }
    last_sign_ = sign;
    double next = value_ + step_ * residual;
    if (has_lo_ && has_hi_ && !(next > lo_ && next < hi_)) next = 0.5 * (lo_ + hi_);
    value_ = std::max(next, floor_);
  }

 private:
  double value_;
  double step_;
  double floor_;
  double lo_ = 0.0, hi_ = 0.0;
  bool has_lo_ = false, has_hi_ = false;
  int last_sign_ = 0;
  int run_ = 0;
};

struct InnerSolve {
  double multiplier = 0.0;
  double used = 0.0;  // constraint left-hand side at `multiplier`
  bool met = false;
};

// Solve used_at(x) = rhs for the multiplier of an inequality (floor = 0,
// slack allowed) or equality (floor < 0 possible, no slack) constraint.
// `used_at` must be monotone non-increasing.  The declared tolerance is met
// first and the root is then polished further while the iteration budget
// lasts, which keeps later feasibility scaling microscopic.
template <typename UsedFn>
InnerSolve solve_multiplier(double rhs, double tol, double init, double step, double floor,
                            bool allow_slack, int max_iters, SolverTrace& trace,
                            UsedFn&& used_at) {
  MultiplierSearch search(init, step, floor);
  const double polish = 1e-12 * std::max(std::abs(rhs), 1.0);
  InnerSolve best;
  double best_abs = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    ++trace.inner_sweeps;
    const double used = used_at(search.value());
    const double residual = used - rhs;
    if (std::abs(residual) < best_abs) {
      best_abs = std::abs(residual);
      best = {search.value(), used, std::abs(residual) <= tol};
    }
    if (std::abs(residual) <= polish) break;
    if (allow_slack && search.at_floor() && residual <= 0.0) {
      best = {search.value(), used, true};
      break;
    }
    search.observe(residual);
  }
  return best;
}

// ------------------------------------------------------------- shared bits

// Weights and per-beam gains gathered in slot order.
struct SlotData {
  arma::vec alpha;
  arma::mat eta;  // num_slots x num_beams
};

SlotData gather_slots(const ClusteredScenario& sc) {
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  SlotData d;
  d.alpha.set_size(num_slots);
  d.eta.set_size(num_slots, num_beams);
  for (int t = 0; t < num_slots; ++t) {
    const UEProfile& prof = sc.profiles[sc.slot_ue[t]];
    d.alpha[t] = prof.weight;
    for (int c = 0; c < num_beams; ++c) d.eta(t, c) = prof.beam_gains[c];
  }
  return d;
}

// Relative change between consecutive stacked power vectors.
double relative_change(const arma::mat& next, const arma::mat& prev) {
  const double base = std::max(arma::norm(prev, "fro"), 1e-300);
  return arma::norm(next - prev, "fro") / base;
}

// Outer-loop stopping rule.  The recorded surrogate equals (up to sign and an
// additive constant) the weighted-rate objective at the powers each iteration
// started from, because the receivers and weights are exact block minimizers;
// consecutive entries therefore measure the true per-iteration objective
// improvement.  Declare convergence once that improvement is a negligible
// fraction of the objective's magnitude.  Raw power vectors are a poor basis
// here: block-coordinate dynamics keep shifting power between near-equivalent
// beams for hundreds of iterations after the objective has flattened.
bool objective_flattened(const std::vector<double>& surrogate, double tol) {
  const std::size_t n = surrogate.size();
  if (n < 2) return false;
  const double prev = surrogate[n - 2];
  const double drop = prev - surrogate[n - 1];
  return drop <= tol * std::max(std::abs(prev), 1e-12);
}

// Scale the powers onto the budget surface when the search left them a hair
// above it; keeps every outer iterate in the same feasible set.
void clamp_to_budget(arma::mat& powers, double used, double budget) {
  if (used > budget && used > 0.0) powers *= budget / used;
}

void clamp_to_budget(arma::vec& powers, double used, double budget) {
  if (used > budget && used > 0.0) powers *= budget / used;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_outer_iters < 1)
    throw std::invalid_argument("SolverConfig: max_outer_iters must be >= 1");
  if (max_inner_iters < 1)
    throw std::invalid_argument("SolverConfig: max_inner_iters must be >= 1");
  if (!(outer_tol > 0.0)) throw std::invalid_argument("SolverConfig: outer_tol must be > 0");
  if (!(step_mu > 0.0) || !(step_mu2 > 0.0) || !(step_omega > 0.0))
    throw std::invalid_argument("SolverConfig: step sizes must be > 0");
  if (!(initial_multiplier >= 0.0))
    throw std::invalid_argument("SolverConfig: initial_multiplier must be >= 0");
}

// --------------------------------------------------------------- full space

SolveResult solve_full_space(const ClusteredScenario& sc, const SolverConfig& cfg) {
  cfg.validate();
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  const int num_clusters = sc.num_clusters();
  const double budget = sc.power_budget;
  const double tol = cfg.budget_tolerance(budget);
  const SlotData sd = gather_slots(sc);

  arma::mat p(num_slots, num_beams);
  p.fill(budget / (static_cast<double>(num_slots) * num_beams));
  arma::mat num(num_slots, num_beams), den0(num_slots, num_beams);

  SolverTrace trace;
  double final_mu = 0.0;

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    // Receivers and weights at the current powers, plus the surrogate value.
    // For the UE at decoding position n the received signal power on beam c
    // is eta*(inter-cluster total + same-cluster powers up to and including
    // position n) + 1.
    double surrogate = 0.0;
    arma::mat q(num_slots, num_beams);  // listener quadratic coefficients
    const arma::rowvec total = arma::sum(p, 0);
    for (int m = 0; m < num_clusters; ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      arma::rowvec cluster(num_beams, arma::fill::zeros);
      for (int i = 0; i < size; ++i) cluster += p.row(start + i);
      arma::rowvec upto(num_beams, arma::fill::zeros);
      for (int i = 0; i < size; ++i) {
        const int t = start + i;
        upto += p.row(t);
        for (int c = 0; c < num_beams; ++c) {
          const double eta = sd.eta(t, c);
          const double phi = eta * ((total[c] - cluster[c]) + upto[c]) + 1.0;
          const double own = eta * p(t, c);
          const double v = std::sqrt(own) / phi;
          const double mse = 1.0 - own / phi;  // in (0, 1]
          const double beta = 1.0 / mse;
          surrogate += sd.alpha[t] * (1.0 + std::log(mse)) / kLn2;
          num(t, c) = sd.alpha[t] * beta * v * std::sqrt(eta);
          q(t, c) = sd.alpha[t] * beta * v * v * eta;
        }
      }
    }
    trace.update_ops += static_cast<std::uint64_t>(num_slots) * num_beams;
    trace.surrogate_per_outer_iter.push_back(surrogate);

    // Multiplier-independent denominators: every listener of slot t on beam c
    // is every UE of other clusters plus same-cluster UEs at position >= t's.
    const arma::rowvec qtotal = arma::sum(q, 0);
    for (int m = 0; m < num_clusters; ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      arma::rowvec qcluster(num_beams, arma::fill::zeros);
      for (int i = 0; i < size; ++i) qcluster += q.row(start + i);
      arma::rowvec suffix(num_beams, arma::fill::zeros);
      for (int i = size - 1; i >= 0; --i) {
        const int t = start + i;
        suffix += q.row(t);
        for (int c = 0; c < num_beams; ++c)
          den0(t, c) = (qtotal[c] - qcluster[c]) + suffix[c];
      }
    }
    trace.update_ops += static_cast<std::uint64_t>(num_slots) * num_beams;

    const auto used_at = [&](double mu) {
      trace.update_ops += static_cast<std::uint64_t>(num_slots) * num_beams;
      double used = 0.0;
      for (int t = 0; t < num_slots; ++t)
        for (int c = 0; c < num_beams; ++c) {
          const double n = num(t, c);
          if (n > 0.0) {
            const double r = n / (den0(t, c) + mu);
            used += r * r;
          }
        }
      return used;
    };
    const InnerSolve inner = solve_multiplier(budget, tol, cfg.initial_multiplier, cfg.step_mu,
                                              0.0, /*allow_slack=*/true, cfg.max_inner_iters,
                                              trace, used_at);
    final_mu = inner.multiplier;

    arma::mat pnew(num_slots, num_beams, arma::fill::zeros);
    for (int t = 0; t < num_slots; ++t)
      for (int c = 0; c < num_beams; ++c) {
        const double n = num(t, c);
        if (n > 0.0) {
          const double r = n / (den0(t, c) + inner.multiplier);
          pnew(t, c) = r * r;
        }
      }
    trace.update_ops += static_cast<std::uint64_t>(num_slots) * num_beams;
    clamp_to_budget(pnew, inner.used, budget);

    p = std::move(pnew);
    trace.budget_usage_per_iter.push_back(std::min(inner.used, budget) / budget);
    trace.outer_iters_used = outer + 1;
    if (objective_flattened(trace.surrogate_per_outer_iter, cfg.outer_tol)) {
      trace.converged = true;
      break;
    }
  }

  trace.multipliers = {final_mu};
  BeamDesign design;
  design.selection.ones(num_slots, num_beams);
  design.powers = std::move(p);
  design.power_budget = budget;
  return {std::move(design), std::move(trace)};
}

// ------------------------------------------------------------ beam selection

std::vector<int> select_beams(const arma::mat& candidate_powers,
                              const ClusteredScenario& sc) {
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  if (candidate_powers.n_rows != static_cast<arma::uword>(num_slots) ||
      candidate_powers.n_cols != static_cast<arma::uword>(num_beams))
    throw std::invalid_argument("select_beams: candidate power shape mismatch");

  std::vector<int> owner(num_beams, 0);
  for (int c = 0; c < num_beams; ++c) {
    double best = -1.0;
    int best_m = 0;
    for (int m = 0; m < sc.num_clusters(); ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      double rate = 0.0;
      double below = 0.0;  // candidate power of earlier decoding positions
      for (int i = 0; i < size; ++i) {
        const int t = start + i;
        const UEProfile& prof = sc.profiles[sc.slot_ue[t]];
        const double eta = prof.beam_gains[c];
        const double own = candidate_powers(t, c);
        if (own > 0.0 && eta > 0.0)
          rate += prof.weight * std::log2(1.0 + own * eta / (below * eta + 1.0));
        below += own;
      }
      if (rate > best) {  // strict: ties keep the lowest cluster index
        best = rate;
        best_m = m;
      }
    }
    owner[c] = best_m;
  }
  return owner;
}

namespace {

// Uniform per-slot candidate powers budget/(N_m * N_t) used to seed beam
// selection in both partial-space solvers.
arma::mat selection_candidates(const ClusteredScenario& sc) {
  arma::mat cand(sc.num_slots(), sc.num_beams);
  for (int t = 0; t < sc.num_slots(); ++t) {
    const double share =
        sc.power_budget /
        (static_cast<double>(sc.cluster_size(sc.slot_cluster[t])) * sc.num_beams);
    cand.row(t).fill(share);
  }
  return cand;
}

std::vector<std::vector<int>> beams_per_cluster(const std::vector<int>& owner, int num_clusters) {
  std::vector<std::vector<int>> beams(num_clusters);
  for (int c = 0; c < static_cast<int>(owner.size()); ++c) beams[owner[c]].push_back(c);
  return beams;
}

}  // namespace

// ------------------------------------------------------------ partial space

SolveResult solve_partial_space(const ClusteredScenario& sc, const SolverConfig& cfg) {
  cfg.validate();
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  const int num_clusters = sc.num_clusters();
  const double budget = sc.power_budget;
  const double tol = cfg.budget_tolerance(budget);
  const SlotData sd = gather_slots(sc);

  const std::vector<int> owner = select_beams(selection_candidates(sc), sc);
  const std::vector<std::vector<int>> beams = beams_per_cluster(owner, num_clusters);

  arma::Mat<arma::u8> selection(num_slots, num_beams, arma::fill::zeros);
  arma::mat p(num_slots, num_beams, arma::fill::zeros);
  std::uint64_t active = 0;
  for (int t = 0; t < num_slots; ++t) {
    const int m = sc.slot_cluster[t];
    for (int c : beams[m]) {
      selection(t, c) = 1;
      p(t, c) = budget / (static_cast<double>(sc.cluster_size(m)) * num_beams);
      ++active;
    }
  }

  // Constant surrogate contribution of unselected UE-beam terms (unit MSE,
  // unit weight variable).
  double inactive_weight = 0.0;
  for (int t = 0; t < num_slots; ++t)
    inactive_weight +=
        sd.alpha[t] * static_cast<double>(num_beams - beams[sc.slot_cluster[t]].size());

  arma::mat num(num_slots, num_beams, arma::fill::zeros);
  arma::mat den0(num_slots, num_beams, arma::fill::zeros);
  arma::mat q_scratch(num_slots, num_beams, arma::fill::zeros);
  SolverTrace trace;
  double final_mu = 0.0;

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    // Receivers and weights on owned beams only: with exclusive ownership the
    // received power has no inter-cluster component.
    double surrogate = inactive_weight / kLn2;
    for (int m = 0; m < num_clusters; ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      for (int c : beams[m]) {
        double upto = 0.0;
        for (int i = 0; i < size; ++i) {
          const int t = start + i;
          upto += p(t, c);
          const double eta = sd.eta(t, c);
          const double phi = eta * upto + 1.0;
          const double own = eta * p(t, c);
          const double v = std::sqrt(own) / phi;
          const double mse = 1.0 - own / phi;
          const double beta = 1.0 / mse;
          surrogate += sd.alpha[t] * (1.0 + std::log(mse)) / kLn2;
          num(t, c) = sd.alpha[t] * beta * v * std::sqrt(eta);
          den0(t, c) = 0.0;  // filled by the suffix pass below
          q_scratch(t, c) = sd.alpha[t] * beta * v * v * eta;
        }
        // Listeners of position n on an owned beam are positions n..N_m.
        double suffix = 0.0;
        for (int i = size - 1; i >= 0; --i) {
          const int t = start + i;
          suffix += q_scratch(t, c);
          den0(t, c) = suffix;
        }
      }
    }
    trace.update_ops += active;
    trace.surrogate_per_outer_iter.push_back(surrogate);

    const auto used_at = [&](double mu) {
      trace.update_ops += active;
      double used = 0.0;
      for (int m = 0; m < num_clusters; ++m) {
        const int start = sc.cluster_start[m];
        const int size = sc.cluster_size(m);
        for (int c : beams[m])
          for (int i = 0; i < size; ++i) {
            const double n = num(start + i, c);
            if (n > 0.0) {
              const double r = n / (den0(start + i, c) + mu);
              used += r * r;
            }
          }
      }
      return used;
    };
    const InnerSolve inner = solve_multiplier(budget, tol, cfg.initial_multiplier, cfg.step_mu2,
                                              0.0, /*allow_slack=*/true, cfg.max_inner_iters,
                                              trace, used_at);
    final_mu = inner.multiplier;

    arma::mat pnew(num_slots, num_beams, arma::fill::zeros);
    for (int m = 0; m < num_clusters; ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      for (int c : beams[m])
        for (int i = 0; i < size; ++i) {
          const int t = start + i;
          const double n = num(t, c);
          if (n > 0.0) {
            const double r = n / (den0(t, c) + inner.multiplier);
            pnew(t, c) = r * r;
          }
        }
    }
    trace.update_ops += active;
    clamp_to_budget(pnew, inner.used, budget);

    p = std::move(pnew);
    trace.budget_usage_per_iter.push_back(std::min(inner.used, budget) / budget);
    trace.outer_iters_used = outer + 1;
    if (objective_flattened(trace.surrogate_per_outer_iter, cfg.outer_tol)) {
      trace.converged = true;
      break;
    }
  }

  trace.multipliers = {final_mu};
  BeamDesign design;
  design.selection = std::move(selection);
  design.powers = std::move(p);
  design.power_budget = budget;
  return {std::move(design), std::move(trace)};
}

// -------------------------------------------------------------- single beam

SolveResult solve_single_beam(const ClusteredScenario& sc, const SolverConfig& cfg) {
  cfg.validate();
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  const int num_clusters = sc.num_clusters();
  const double budget = sc.power_budget;
  const double tol = cfg.budget_tolerance(budget);
  const SlotData sd = gather_slots(sc);

  const std::vector<int> owner = select_beams(selection_candidates(sc), sc);
  const std::vector<std::vector<int>> beams = beams_per_cluster(owner, num_clusters);

  arma::vec pc(num_beams);
  pc.fill(budget / num_beams);
  arma::vec iota(num_slots);
  for (int t = 0; t < num_slots; ++t)
    iota[t] = 1.0 / static_cast<double>(sc.cluster_size(sc.slot_cluster[t]));

  arma::Mat<arma::u8> selection(num_slots, num_beams, arma::fill::zeros);
  std::uint64_t active = 0;
  for (int t = 0; t < num_slots; ++t)
    for (int c : beams[sc.slot_cluster[t]]) {
      selection(t, c) = 1;
      ++active;
    }
  double inactive_weight = 0.0;
  for (int t = 0; t < num_slots; ++t)
    inactive_weight +=
        sd.alpha[t] * static_cast<double>(num_beams - beams[sc.slot_cluster[t]].size());

  const auto stacked_powers = [&](const arma::vec& pc_v, const arma::vec& iota_v) {
    arma::mat out(num_slots, num_beams, arma::fill::zeros);
    for (int t = 0; t < num_slots; ++t)
      for (int c : beams[sc.slot_cluster[t]]) out(t, c) = iota_v[t] * pc_v[c];
    return out;
  };

  arma::mat p = stacked_powers(pc, iota);
  arma::mat v(num_slots, num_beams, arma::fill::zeros);
  arma::mat beta(num_slots, num_beams, arma::fill::zeros);
  SolverTrace trace;
  double final_mu = 0.0;
  arma::vec omega(num_clusters, arma::fill::ones);

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    // Receivers and weights at the current (per-beam totals, shares).
    double surrogate = inactive_weight / kLn2;
    for (int m = 0; m < num_clusters; ++m) {
      const int start = sc.cluster_start[m];
      const int size = sc.cluster_size(m);
      for (int c : beams[m]) {
        double cum = 0.0;  // share prefix including the current position
        for (int i = 0; i < size; ++i) {
          const int t = start + i;
          cum += iota[t];
          const double eta = sd.eta(t, c);
          const double phi = eta * pc[c] * cum + 1.0;
          const double own = eta * pc[c] * iota[t];
          v(t, c) = std::sqrt(own) / phi;
          const double mse = 1.0 - own / phi;
          beta(t, c) = 1.0 / mse;
          surrogate += sd.alpha[t] * (1.0 + std::log(mse)) / kLn2;
        }
      }
    }
    trace.update_ops += active;
    trace.surrogate_per_outer_iter.push_back(surrogate);

    // Inner alternation between per-beam totals (budget multiplier) and
    // per-cluster shares (share multipliers), both solved exactly at the
    // frozen receivers/weights.
    omega.ones();
    double used_total = arma::accu(pc);
    for (int sweep = 0; sweep < cfg.max_inner_iters; ++sweep) {
      const arma::vec pc_before = pc;
      const arma::vec iota_before = iota;

      // (a) per-beam totals: numerator and denominator of the stationarity
      // expression, with the current shares folded in.
      arma::vec num_c(num_beams, arma::fill::zeros);
      arma::vec den_c(num_beams, arma::fill::zeros);
      for (int m = 0; m < num_clusters; ++m) {
        const int start = sc.cluster_start[m];
        const int size = sc.cluster_size(m);
        for (int c : beams[m]) {
          double cum = 0.0;
          double num_acc = 0.0;
          double den_acc = 0.0;
          for (int i = 0; i < size; ++i) {
            const int t = start + i;
            cum += iota[t];
            num_acc += sd.alpha[t] * beta(t, c) * v(t, c) * std::sqrt(sd.eta(t, c) * iota[t]);
            den_acc += sd.alpha[t] * beta(t, c) * v(t, c) * v(t, c) * sd.eta(t, c) * cum;
          }
          num_c[c] = num_acc;
          den_c[c] = den_acc;
        }
      }
      trace.update_ops += active;

      const auto used_at = [&](double mu) {
        trace.update_ops += static_cast<std::uint64_t>(num_beams);
        double used = 0.0;
        for (int c = 0; c < num_beams; ++c)
          if (num_c[c] > 0.0) {
            const double r = num_c[c] / (den_c[c] + mu);
            used += r * r;
          }
        return used;
      };
      const InnerSolve inner = solve_multiplier(budget, tol, cfg.initial_multiplier,
                                                cfg.step_mu2, 0.0, /*allow_slack=*/true,
                                                cfg.max_inner_iters, trace, used_at);
      final_mu = inner.multiplier;
      for (int c = 0; c < num_beams; ++c) {
        if (num_c[c] > 0.0) {
          const double r = num_c[c] / (den_c[c] + inner.multiplier);
          pc[c] = r * r;
        } else {
          pc[c] = 0.0;
        }
      }
      clamp_to_budget(pc, inner.used, budget);
      used_total = std::min(inner.used, budget);

      // (b) per-cluster shares: for the UE at position n the listeners on an
      // owned beam are positions n..N_m, weighted by that beam's total.
      const double share_tol = cfg.multiplier_tol > 0.0 ? cfg.multiplier_tol : 1e-6;
      for (int m = 0; m < num_clusters; ++m) {
        const int start = sc.cluster_start[m];
        const int size = sc.cluster_size(m);
        arma::vec num_i(size, arma::fill::zeros);
        arma::vec den_i(size, arma::fill::zeros);
        for (int c : beams[m]) {
          double suffix = 0.0;
          for (int i = size - 1; i >= 0; --i) {
            const int t = start + i;
            suffix += sd.alpha[t] * beta(t, c) * v(t, c) * v(t, c) * sd.eta(t, c) * pc[c];
            num_i[i] += sd.alpha[t] * beta(t, c) * v(t, c) * std::sqrt(sd.eta(t, c) * pc[c]);
            den_i[i] += suffix;
          }
        }
        trace.update_ops += static_cast<std::uint64_t>(beams[m].size()) * size;

        bool any = false;
        double min_den = std::numeric_limits<double>::infinity();
        for (int i = 0; i < size; ++i)
          if (num_i[i] > 0.0) {
            any = true;
            min_den = std::min(min_den, den_i[i]);
          }
        if (!any) {
          // No usable beam: powers are zero, keep the uniform share split.
          for (int i = 0; i < size; ++i) iota[start + i] = 1.0 / size;
          omega[m] = 0.0;
          continue;
        }
        // The share constraint is an equality, so its multiplier may sit
        // below zero; the residual blows up at -min_den, which brackets it.
        const double floor = -min_den * (1.0 - 1e-9);
        const auto share_at = [&](double w) {
          trace.update_ops += static_cast<std::uint64_t>(size);
          double s = 0.0;
          for (int i = 0; i < size; ++i)
            if (num_i[i] > 0.0) {
              const double r = num_i[i] / (den_i[i] + w);
              s += r * r;
            }
          return s;
        };
        const InnerSolve share = solve_multiplier(1.0, share_tol, cfg.initial_multiplier,
                                                  cfg.step_omega, floor, /*allow_slack=*/false,
                                                  cfg.max_inner_iters, trace, share_at);
        omega[m] = share.multiplier;
        double sum = 0.0;
        for (int i = 0; i < size; ++i) {
          double s = 0.0;
          if (num_i[i] > 0.0) {
            const double r = num_i[i] / (den_i[i] + share.multiplier);
            s = r * r;
          }
          iota[start + i] = s;
          sum += s;
        }
        if (sum > 0.0)
          for (int i = 0; i < size; ++i) iota[start + i] /= sum;  // exact equality
      }

      const double move = std::max(relative_change(pc, pc_before),
                                   relative_change(iota, iota_before));
      if (move < 1e-10) break;
    }

    p = stacked_powers(pc, iota);
    trace.budget_usage_per_iter.push_back(used_total / budget);
    trace.outer_iters_used = outer + 1;
    if (objective_flattened(trace.surrogate_per_outer_iter, cfg.outer_tol)) {
      trace.converged = true;
      break;
    }
  }

  trace.multipliers.push_back(final_mu);
  for (int m = 0; m < num_clusters; ++m) trace.multipliers.push_back(omega[m]);

  BeamDesign design;
  design.selection = std::move(selection);
  design.powers = std::move(p);
  design.power_budget = budget;
  return {std::move(design), std::move(trace)};
}

// ---------------------------------------------------------------- baselines

BeamDesign baseline_mf(const ClusteredScenario& sc) {
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  const int num_clusters = sc.num_clusters();
  const int num_sectors = sc.assignment.num_sectors;
  BeamDesign d;
  d.selection.zeros(num_slots, num_beams);
  d.powers.zeros(num_slots, num_beams);
  d.power_budget = sc.power_budget;
  for (int m = 0; m < num_clusters; ++m) {
    // The beam whose position on the index grid matches the sector's: sector
    // i of S covers beam indices ((i-1)*N_t/S, i*N_t/S], so its middle beam
    // is ceil((i - 1/2)*N_t/S).  With S = N_t this is the sector index.
    const int sector = sc.assignment.sector_of_cluster[m];  // 1-based
    const double pos = (static_cast<double>(sector) - 0.5) *
                       static_cast<double>(num_beams) / static_cast<double>(num_sectors);
    const int beam = std::clamp(static_cast<int>(std::ceil(pos)), 1, num_beams) - 1;
    const int size = sc.cluster_size(m);
    const double power = sc.power_budget / (static_cast<double>(num_clusters) * size);
    for (int i = 0; i < size; ++i) {
      const int t = sc.cluster_start[m] + i;
      d.selection(t, beam) = 1;
      d.powers(t, beam) = power;
    }
  }
  return d;
}

BeamDesign baseline_sdma(const ClusteredScenario& sc) {
  const int num_slots = sc.num_slots();
  const int num_beams = sc.num_beams;
  BeamDesign d;
  d.selection.zeros(num_slots, num_beams);
  d.powers.zeros(num_slots, num_beams);
  d.power_budget = sc.power_budget;
  const double power = sc.power_budget / static_cast<double>(sc.num_ues());
  for (int t = 0; t < num_slots; ++t) {
    const arma::vec& gains = sc.profiles[sc.slot_ue[t]].beam_gains;
    int best = 0;
    for (int c = 1; c < num_beams; ++c)
      if (gains[c] > gains[best]) best = c;  // ties keep the lower index
    d.selection(t, best) = 1;
    d.powers(t, best) = power;
  }
  return d;
}

RateReport baseline_tdma(const ClusteredScenario& sc, int num_realizations,
                         std::uint64_t master_seed, int threads) {
  if (num_realizations < 1)
    throw std::invalid_argument("baseline_tdma: num_realizations must be >= 1");
  const int num_ues = sc.num_ues();
  const int num_beams = sc.num_beams;
  const double pmax = sc.power_budget;

  std::vector<int> best_beam(num_ues, 0);
  for (int u = 0; u < num_ues; ++u) {
    const arma::vec& gains = sc.profiles[u].beam_gains;
    for (int c = 1; c < num_beams; ++c)
      if (gains[c] > gains[best_beam[u]]) best_beam[u] = c;
  }

  arma::mat rates(num_realizations, num_ues);
  auto worker = [&](int first, int last) {
    for (int r = first; r < last; ++r)
      for (int u = 0; u < num_ues; ++u) {
        StreamRng rng(master_seed, rng_domain::kFading,
                      fading_stream_index(static_cast<std::uint64_t>(r), u));
        const SmallScaleFading fading = draw_fading(rng, num_beams);
        const double x = std::norm(fading.coeffs[best_beam[u]]);
        const double eta = sc.profiles[u].beam_gains[best_beam[u]];
        rates(r, u) = std::log2(1.0 + pmax * eta * x) / static_cast<double>(num_ues);
      }
  };
  threads = std::max(1, std::min(threads, num_realizations));
  if (threads == 1) {
    worker(0, num_realizations);
  } else {
    std::vector<std::thread> pool;
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
    for (int u = 0; u < num_ues; ++u) w += sc.profiles[u].weight * rates(r, u);
    weighted[r] = w;
    mean += w;
  }
  mean /= num_realizations;
  report.weighted_sum_rate = mean;
  if (num_realizations > 1) {
    double ss = 0.0;
    for (int r = 0; r < num_realizations; ++r) {
      const double dd = weighted[r] - mean;
      ss += dd * dd;
    }
    report.sum_rate_stderr =
        std::sqrt(ss / (static_cast<double>(num_realizations) * (num_realizations - 1)));
  }
  // Time-shared single-user bound with the mean fading power in place of the
  // draw (concavity of the log).
  double bound = 0.0;
  for (int u = 0; u < num_ues; ++u)
    bound += sc.profiles[u].weight *
             std::log2(1.0 + pmax * sc.profiles[u].beam_gains[best_beam[u]]) /
             static_cast<double>(num_ues);
  report.upper_bound = bound;
  return report;
}

}  // namespace beamnoma
