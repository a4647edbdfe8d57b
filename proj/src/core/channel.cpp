// SPDX-License-Identifier: Apache-2.0

#include "core/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamnoma {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

void check_aod(double aod, const char* who) {
  if (!(aod >= -kHalfPi && aod <= kHalfPi))
    throw std::domain_error(std::string(who) + ": departure angle " + std::to_string(aod) +
                            " outside [-pi/2, pi/2]");
}
}  // namespace

void ArrayConfig::validate() const {
  if (num_antennas < 2)
    throw std::invalid_argument("ArrayConfig: num_antennas must be >= 2, got " +
                                std::to_string(num_antennas));
  if (!(spacing > 0.0)) throw std::invalid_argument("ArrayConfig: spacing must be > 0");
  if (!(carrier_wavelength > 0.0))
    throw std::invalid_argument("ArrayConfig: carrier_wavelength must be > 0");
}

void PathProfile::validate() const {
  if (paths.empty()) throw std::invalid_argument("PathProfile: at least one path required");
  for (const PathComponent& p : paths) {
    if (!(p.attenuation >= 0.0))
      throw std::invalid_argument("PathProfile: attenuation must be >= 0");
    if (!(p.distance >= 0.0)) throw std::invalid_argument("PathProfile: distance must be >= 0");
    check_aod(p.aod, "PathProfile");
  }
}

arma::cx_vec steering_vector(double aod, const ArrayConfig& array) {
  array.validate();
  check_aod(aod, "steering_vector");
  const int n = array.num_antennas;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double phase_step = -2.0 * kPi * array.spacing * std::sin(aod);
  arma::cx_vec v(n);
  for (int i = 0; i < n; ++i)
    v[i] = std::polar(scale, phase_step * static_cast<double>(i));
  return v;
}

BeamspaceBasis beamspace_basis(const ArrayConfig& array) {
  array.validate();
  const int n = array.num_antennas;
  BeamspaceBasis out;
  out.basis.set_size(n, n);
  out.sampled_angles.set_size(n);
  for (int i = 1; i <= n; ++i) {
    const double sine = 2.0 * static_cast<double>(i) / static_cast<double>(n) - 1.0;
    const double angle = std::asin(sine);
    out.sampled_angles[i - 1] = angle;
    out.basis.col(i - 1) = steering_vector(angle, array);
  }
  return out;
}

int nearest_beam_index(double aod, int num_antennas) {
  check_aod(aod, "nearest_beam_index");
  // Grid point i (1-based) sits at sine 2i/N - 1; in grid units the sine maps
  // to t = (sin + 1) * N / 2.  Round half-down so midpoints take the lower
  // index, then clamp into the valid range (sin = -1 has no grid point of its
  // own and belongs to the first one).
  const double t = (std::sin(aod) + 1.0) * static_cast<double>(num_antennas) / 2.0;
  const int i = static_cast<int>(std::ceil(t - 0.5));
  return std::clamp(i, 1, num_antennas) - 1;
}

arma::vec beam_gains_from_paths(const PathProfile& profile, int num_antennas,
                                double carrier_wavelength) {
  profile.validate();
  if (num_antennas < 2)
    throw std::invalid_argument("beam_gains_from_paths: num_antennas must be >= 2");
  if (!(carrier_wavelength > 0.0))
    throw std::invalid_argument("beam_gains_from_paths: carrier_wavelength must be > 0");
  arma::cx_vec acc(num_antennas, arma::fill::zeros);
  for (const PathComponent& p : profile.paths) {
    const double phase = -2.0 * kPi * p.distance / carrier_wavelength;
    acc[nearest_beam_index(p.aod, num_antennas)] += std::polar(p.attenuation, phase);
  }
  arma::vec gains(num_antennas);
  for (int c = 0; c < num_antennas; ++c) gains[c] = std::norm(acc[c]);
  return gains;
}

std::pair<UEProfile, PathProfile> generate_ue_profile(StreamRng& rng,
                                                      const ChannelGenParams& params,
                                                      const ArrayConfig& array, int ue_id) {
  array.validate();
  if (params.num_paths < 1)
    throw std::invalid_argument("ChannelGenParams: num_paths must be >= 1");
  if (!(params.cell_radius_m > 0.0))
    throw std::invalid_argument("ChannelGenParams: cell_radius_m must be > 0");
  if (!(params.angular_spread_deg >= 0.0))
    throw std::invalid_argument("ChannelGenParams: angular_spread_deg must be >= 0");
  if (!(params.path_decay >= 0.0))
    throw std::invalid_argument("ChannelGenParams: path_decay must be >= 0");
  if (!(params.pathloss_exponent >= 0.0))
    throw std::invalid_argument("ChannelGenParams: pathloss_exponent must be >= 0");

  // Dominant departure angle uniform over the array's field of view, and a
  // position uniform over the outer annulus between R/2 and R (density ~ r).
  // A pure power law is not a credible loss model near the array, so the
  // inner half of the disc is excluded instead of letting gains blow up.
  const double aod = -kHalfPi + kPi * rng.uniform();
  const double radius = params.cell_radius_m;
  const double dist = radius * std::sqrt(0.25 + 0.75 * rng.uniform());

  // Bounded power-law loss: unit total channel power out to the annulus'
  // median distance, decaying as dist^-pathloss_exponent beyond it.  The cap
  // keeps the power law from inflating near-UE gains it was never fit for,
  // and with unit noise the configured budget-to-noise ratio reads directly
  // as the median UE's operating SNR.
  const double median_dist = radius * std::sqrt(0.625);
  const double large_scale =
      std::min(1.0, std::pow(dist / median_dist, -params.pathloss_exponent));

  // Path powers decay exponentially with the path index; amplitudes are
  // normalized so the squared amplitudes sum to the large-scale gain.
  const int num_paths = params.num_paths;
  std::vector<double> rel_power(num_paths);
  double total = 0.0;
  for (int l = 0; l < num_paths; ++l) {
    rel_power[l] = std::exp(-params.path_decay * static_cast<double>(l));
    total += rel_power[l];
  }

  const double spread_rad = params.angular_spread_deg * kPi / 180.0;
  PathProfile path_profile;
  path_profile.paths.resize(num_paths);
  for (int l = 0; l < num_paths; ++l) {
    PathComponent& p = path_profile.paths[l];
    if (l == 0) {
      // The dominant path departs exactly along the dominant angle at the
      // geometric distance; secondary paths scatter around it with a Laplace
      // angular offset and an excess length of up to 50 wavelengths, which
      // decorrelates their carrier phases.
      p.aod = aod;
      p.distance = dist;
    } else {
      p.aod = std::clamp(aod + rng.laplace(spread_rad), -kHalfPi, kHalfPi);
      p.distance = dist + rng.uniform() * 50.0 * array.carrier_wavelength;
    }
    p.attenuation = std::sqrt(large_scale * rel_power[l] / total);
  }

  UEProfile profile;
  profile.aod = aod;
  profile.beam_gains =
      beam_gains_from_paths(path_profile, array.num_antennas, array.carrier_wavelength);
  // The per-bin split keeps the sampled phase structure, but the long-term
  // total is the large-scale power by definition: averaging over path phases
  // the cross terms vanish, so a single static draw must not move it.
  const double binned_total = arma::accu(profile.beam_gains);
  if (binned_total > 0.0) profile.beam_gains *= large_scale / binned_total;
  profile.weight = 1.0;
  profile.id = ue_id;
  return {std::move(profile), std::move(path_profile)};
}

SmallScaleFading draw_fading(StreamRng& rng, int num_antennas) {
  SmallScaleFading f;
  f.coeffs.set_size(num_antennas);
  for (int c = 0; c < num_antennas; ++c) f.coeffs[c] = rng.cgauss();
  return f;
}

ChannelVector channel_vector(const UEProfile& profile, const SmallScaleFading& fading,
                             const BeamspaceBasis& basis) {
  const arma::uword n = basis.basis.n_rows;
  if (profile.beam_gains.n_elem != n || fading.coeffs.n_elem != n)
    throw std::invalid_argument("channel_vector: dimension mismatch");
  arma::cx_vec scaled(n);
  for (arma::uword c = 0; c < n; ++c)
    scaled[c] = std::sqrt(profile.beam_gains[c]) * fading.coeffs[c];
  return {basis.basis * scaled};
}

arma::cx_mat correlation_matrix(const UEProfile& profile, const BeamspaceBasis& basis) {
  const arma::uword n = basis.basis.n_rows;
  if (profile.beam_gains.n_elem != n)
    throw std::invalid_argument("correlation_matrix: dimension mismatch");
  arma::cx_mat lambda(n, n, arma::fill::zeros);
  lambda.diag() = arma::conv_to<arma::cx_vec>::from(profile.beam_gains);
  return basis.basis * lambda * basis.basis.t();
}

arma::vec estimate_beam_gains(const std::vector<ChannelVector>& realizations,
                              const BeamspaceBasis& basis) {
  if (realizations.empty())
    throw std::invalid_argument("estimate_beam_gains: need at least one realization");
  const arma::uword n = basis.basis.n_rows;
  arma::vec acc(n, arma::fill::zeros);
  for (const ChannelVector& cv : realizations) {
    if (cv.h.n_elem != n)
      throw std::invalid_argument("estimate_beam_gains: dimension mismatch");
    const arma::cx_vec beam_domain = basis.basis.t() * cv.h;
    for (arma::uword c = 0; c < n; ++c) acc[c] += std::norm(beam_domain[c]);
  }
  acc /= static_cast<double>(realizations.size());
  return arma::clamp(acc, 0.0, arma::datum::inf);
}

double channel_gain(const UEProfile& profile, const SmallScaleFading& fading) {
  if (profile.beam_gains.n_elem != fading.coeffs.n_elem)
    throw std::invalid_argument("channel_gain: dimension mismatch");
  double g = 0.0;
  for (arma::uword c = 0; c < profile.beam_gains.n_elem; ++c)
    g += profile.beam_gains[c] * std::norm(fading.coeffs[c]);
  return g;
}

}  // namespace beamnoma
