// SPDX-License-Identifier: Apache-2.0
//
// Deterministic, stream-splittable random number generation.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace beamnoma {

// splitmix64 step; used only to mix seeds for derived streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One independent random stream, keyed by (master seed, domain tag, index).
// Every scenario element (a UE drop, one Monte Carlo realization of one UE's
// fading) owns its own stream, so draws are reproducible bit-for-bit no
// matter how work is ordered or distributed across threads.  Distributions
// are implemented in-house on top of the raw engine so that the produced
// values do not depend on the standard library version.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t domain, std::uint64_t index) {
    std::uint64_t s = master_seed;
    std::uint64_t k = splitmix64(s);
    s = k ^ (domain * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    k = splitmix64(s);
    s = k ^ (index * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL);
    engine_.seed(splitmix64(s));
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller (pairwise, second value cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex Gaussian, zero mean, E|z|^2 = 1.
  std::complex<double> cgauss() {
    const double r = std::sqrt(-std::log(uniform_pos()));
    const double a = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(a), r * std::sin(a)};
  }

  // Zero-mean Laplace with the given scale parameter b (variance 2 b^2).
  double laplace(double scale) {
    double v = uniform();
    if (v == 0.0) v = 0x1.0p-54;  // avoid the log(0) endpoint
    const double u = v - 0.5;
    const double mag = std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? scale * mag : -scale * mag;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Domain tags keeping unrelated draws on disjoint streams.
namespace rng_domain {
inline constexpr std::uint64_t kUeDrop = 1;   // stream index: UE id
inline constexpr std::uint64_t kFading = 2;   // stream index: (realization << 20) | UE id
inline constexpr std::uint64_t kGeneric = 99; // tests and ad-hoc sampling
}  // namespace rng_domain

// Stream index for the fading draw of one UE in one Monte Carlo realization.
// Keeping (realization, ue) on its own stream makes the draw independent of
// the number of UEs actually evaluated and of any thread partitioning.
inline std::uint64_t fading_stream_index(std::uint64_t realization, std::uint64_t ue_id) {
  return (realization << 20) | ue_id;
}

}  // namespace beamnoma
