// SPDX-License-Identifier: Apache-2.0
//
// Beamspace channel model for a uniform linear array: steering vectors, the
// orthonormal base-beam basis, multipath synthesis, and per-beam statistical
// gains.

#pragma once

#include <armadillo>
#include <complex>
#include <utility>
#include <vector>

#include "core/rng.hpp"

namespace beamnoma {

// Transmit array geometry.
struct ArrayConfig {
  int num_antennas = 0;             // N_t
  double spacing = 0.5;             // element spacing / carrier wavelength
  double carrier_wavelength = 0.1;  // meters

  void validate() const;  // throws std::invalid_argument
};

// One propagation path from the array to a UE.
struct PathComponent {
  double attenuation = 0.0;  // amplitude, >= 0
  double distance = 0.0;     // path length in meters, >= 0
  double aod = 0.0;          // departure angle in radians, within [-pi/2, pi/2]
};

// The full multipath profile of one UE.
struct PathProfile {
  std::vector<PathComponent> paths;

  void validate() const;
};

// Orthonormal base-beam matrix and the angles its columns point at.
struct BeamspaceBasis {
  arma::cx_mat basis;        // N_t x N_t, column i-1 steers at sampled_angles[i-1]
  arma::vec sampled_angles;  // arcsin(2i/N_t - 1), i = 1..N_t
};

// Statistical (long-term) description of one UE.
struct UEProfile {
  double aod = 0.0;      // dominant departure angle in radians
  arma::vec beam_gains;  // per-beam gains eta, length N_t, all >= 0
  double weight = 1.0;   // scheduling priority, > 0
  int id = 0;
};

// One realization of the small-scale fading vector (i.i.d. CN(0,1) entries).
struct SmallScaleFading {
  arma::cx_vec coeffs;
};

// Antenna-domain channel vector.
struct ChannelVector {
  arma::cx_vec h;
};

// Knobs of the multipath generator.
struct ChannelGenParams {
  int num_paths = 10;              // L
  double angular_spread_deg = 5.0; // Laplace scale of path angles around the dominant one
  double path_decay = 0.5;         // exponential power profile: power_l ~ exp(-decay*(l-1))
  double pathloss_exponent = 3.7;
  double cell_radius_m = 50.0;
};

// Array response for a departure angle; entry i (1-based) is
// (1/sqrt[N_t]) * exp(-j*2*pi*(i-1)*spacing*sin(aod)).
arma::cx_vec steering_vector(double aod, const ArrayConfig& array);

// The common base-beam basis: column i steers at arcsin(2i/N_t - 1), so the
// sampled sines form a uniform grid of pitch 2/N_t ending at +1.  With
// half-wavelength spacing the matrix is unitary.
BeamspaceBasis beamspace_basis(const ArrayConfig& array);

// Index (0-based) of the sampled-sine grid point nearest to sin(aod);
// equidistant points resolve to the lower index.
int nearest_beam_index(double aod, int num_antennas);

// Per-beam gains from a path set: each path contributes its complex amplitude
// attenuation * exp(-j*2*pi*distance/carrier_wavelength) to the bin of its
// nearest sampled sine, and the gain of a bin is the squared magnitude of the
// accumulated sum.
arma::vec beam_gains_from_paths(const PathProfile& profile, int num_antennas,
                                double carrier_wavelength);

// Draw one UE: position uniform in the outer annulus (between half the cell
// radius and the full radius), a dominant departure angle with Laplace-spread
// secondary paths, exponentially decaying path powers, and a bounded
// power-law large-scale gain (unit total channel power out to the median
// distance, decaying beyond it).  Returns the statistical profile and paths.
std::pair<UEProfile, PathProfile> generate_ue_profile(StreamRng& rng,
                                                      const ChannelGenParams& params,
                                                      const ArrayConfig& array, int ue_id);

// One i.i.d. CN(0,1) fading vector of the given length.
SmallScaleFading draw_fading(StreamRng& rng, int num_antennas);

// Antenna-domain channel h = U * diag(sqrt(beam_gains)) * fading.
ChannelVector channel_vector(const UEProfile& profile, const SmallScaleFading& fading,
                             const BeamspaceBasis& basis);

// Long-term channel correlation E[h h^H] = U * diag(beam_gains) * U^H.
arma::cx_mat correlation_matrix(const UEProfile& profile, const BeamspaceBasis& basis);

// Diagonal of U^H * (sample average of h h^H) * U, clamped at zero: the
// standard consistent estimator of the per-beam gains.
arma::vec estimate_beam_gains(const std::vector<ChannelVector>& realizations,
                              const BeamspaceBasis& basis);

// Instantaneous channel power sum_c beam_gains[c] * |fading[c]|^2, which by
// the basis' unitarity equals ||channel_vector(...)||^2.
double channel_gain(const UEProfile& profile, const SmallScaleFading& fading);

}  // namespace beamnoma
