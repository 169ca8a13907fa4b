// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef AIRCOMP_CHANNEL_HPP
#define AIRCOMP_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aircomp/numerics.hpp"
#include "aircomp/phase_shift.hpp"

namespace aircomp {

/// Raised for any configuration value that violates its documented range.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

/// Scalar link-level parameters. Defaults are the reference scenario:
/// AP at the origin, IRS 10 m above it, devices in a 20 m disk around
/// (200, 0, 0), 10-antenna AP, 20 devices, 1-bit IRS.
struct SystemConfig {
  int M = 10;  // AP antennas
  int N = 64;  // IRS elements
  int K = 20;  // devices
  int L = 2;   // phase quantization levels

  double p_max = 0.1;      // W (20 dBm)
  double sigma2 = 1e-11;   // W (-80 dBm)
  double rician_delta = 10.0;
  bool pure_los = false;      // device-IRS links are exactly the LoS component
  bool block_direct = false;  // direct device-AP links are zero

  double spacing_ratio = 0.5;  // d / lambda
  double pathloss_exponent_reflected = 2.2;
  double pathloss_exponent_direct = 3.8;
  double ref_loss_linear = 1e-3;  // 30 dB at 1 m

  Position ap_position{0.0, 0.0, 0.0};
  Position irs_position{0.0, 0.0, 10.0};
  Position disk_center{200.0, 0.0, 0.0};
  double disk_radius = 20.0;

  // Static angle overrides; drawn uniformly from (-pi/2, pi/2) when absent.
  std::optional<double> phi_r;
  std::optional<double> phi_t;
  std::vector<double> nu;  // empty or exactly K entries
};

inline void validate(const SystemConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid configuration: " + what);
  };
  require(c.M >= 1, "M must be >= 1");
  require(c.N >= 1, "N must be >= 1");
  require(c.K >= 1, "K must be >= 1");
  require(c.L >= 1, "L must be >= 1");
  require(c.p_max > 0.0, "pmax must be > 0");
  require(c.sigma2 >= 0.0, "sigma2 must be >= 0");
  require(c.rician_delta >= 0.0, "rician_delta must be >= 0");
  require(c.spacing_ratio > 0.0, "spacing_ratio must be > 0");
  require(c.pathloss_exponent_reflected >= 0.0, "pathloss_exponent_reflected must be >= 0");
  require(c.pathloss_exponent_direct >= 0.0, "pathloss_exponent_direct must be >= 0");
  require(c.ref_loss_linear > 0.0 && c.ref_loss_linear <= 1.0, "ref_loss must lie in (0, 1]");
  require(c.disk_radius >= 0.0, "disk_radius must be >= 0");
  require(c.nu.empty() || c.nu.size() == static_cast<std::size_t>(c.K),
          "nu override must have exactly K entries");
}

struct PathlossResult {
  double gain;
  bool clamped;  // distance was below 1 m and was raised to 1 m
};

inline PathlossResult pathloss_checked(double distance_m, double exponent, double ref_loss_linear) {
  const bool clamped = distance_m < 1.0;
  const double d = clamped ? 1.0 : distance_m;
  return {ref_loss_linear * std::pow(d, -exponent), clamped};
}

/// Large-scale power attenuation ref_loss * d^-exponent, d clamped to >= 1 m.
inline double pathloss(double distance_m, double exponent, double ref_loss_linear) {
  return pathloss_checked(distance_m, exponent, ref_loss_linear).gain;
}

struct Geometry {
  Position ap_position;
  Position irs_position;
  std::vector<Position> device_positions;

  double phi_r = 0.0;       // IRS -> AP angle of arrival at the AP
  double phi_t = 0.0;       // IRS -> AP angle of departure at the IRS
  std::vector<double> nu;   // device k -> IRS angle of arrival

  double rho_1 = 0.0;              // IRS-AP path loss
  std::vector<double> rho_d;       // direct path losses (0 when blocked)
  std::vector<double> rho_r;       // device-IRS path losses

  int near_field_clamps = 0;  // links shorter than 1 m

  double rho_r_min() const { return *std::min_element(rho_r.begin(), rho_r.end()); }
};

/// Draws device positions and any non-overridden angles from `stream`.
/// Draw order: K positions (radius, azimuth), then phi_r, phi_t, then nu.
inline Geometry make_geometry(const SystemConfig& config, RngStream& stream) {
  validate(config);
  Geometry g;
  g.ap_position = config.ap_position;
  g.irs_position = config.irs_position;

  const auto K = static_cast<std::size_t>(config.K);
  g.device_positions.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double r = config.disk_radius * std::sqrt(stream.uniform());
    const double azimuth = kTwoPi * stream.uniform();
    g.device_positions.push_back({config.disk_center.x + r * std::cos(azimuth),
                                  config.disk_center.y + r * std::sin(azimuth),
                                  config.disk_center.z});
  }

  auto draw_angle = [&stream] { return stream.uniform(-kPi / 2.0, kPi / 2.0); };
  const double phi_r = draw_angle();
  const double phi_t = draw_angle();
  g.phi_r = config.phi_r.value_or(phi_r);
  g.phi_t = config.phi_t.value_or(phi_t);
  g.nu.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double drawn = draw_angle();
    g.nu[k] = config.nu.empty() ? drawn : config.nu[k];
  }

  auto loss = [&g, &config](const Position& a, const Position& b, double exponent) {
    const PathlossResult r = pathloss_checked(distance(a, b), exponent, config.ref_loss_linear);
    if (r.clamped) ++g.near_field_clamps;
    return r.gain;
  };
  g.rho_1 = loss(g.ap_position, g.irs_position, config.pathloss_exponent_reflected);
  g.rho_d.resize(K);
  g.rho_r.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const Position& dev = g.device_positions[k];
    g.rho_r[k] = loss(g.irs_position, dev, config.pathloss_exponent_reflected);
    g.rho_d[k] =
        config.block_direct ? 0.0 : loss(g.ap_position, dev, config.pathloss_exponent_direct);
  }
  return g;
}

/// One coherence block. The IRS-AP matrix G = sqrt(rho_1) a_M(phi_r) a_N(phi_t)^H
/// is rank one and is carried by its three parameters only.
struct ChannelRealization {
  std::vector<ComplexVector> h_direct;   // K vectors of length M
  std::vector<ComplexVector> h_reflect;  // K vectors of length N
  double rho_1 = 0.0;
  double phi_r = 0.0;
  double phi_t = 0.0;
  double spacing_ratio = 0.5;

  std::size_t devices() const { return h_direct.size(); }
  std::size_t antennas() const { return h_direct.empty() ? 0 : h_direct.front().size(); }
  std::size_t elements() const { return h_reflect.empty() ? 0 : h_reflect.front().size(); }
};

/// Draw order: all K direct vectors, then all K scattered IRS vectors.
/// Draws are consumed even for blocked or pure-LoS links so that the
/// remaining sequence does not depend on those flags.
inline ChannelRealization sample_channels(const Geometry& geometry, const SystemConfig& config,
                                          RngStream& stream) {
  const auto K = static_cast<std::size_t>(config.K);
  const auto M = static_cast<std::size_t>(config.M);
  if (geometry.rho_d.size() != K || geometry.rho_r.size() != K || geometry.nu.size() != K) {
    throw std::invalid_argument("sample_channels: geometry does not match K");
  }
  ChannelRealization out;
  out.rho_1 = geometry.rho_1;
  out.phi_r = geometry.phi_r;
  out.phi_t = geometry.phi_t;
  out.spacing_ratio = config.spacing_ratio;

  out.h_direct.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    ComplexVector h = complex_gaussian_vector(stream, M);
    const double amp = std::sqrt(geometry.rho_d[k]);
    for (Complex& z : h) z *= amp;
    out.h_direct.push_back(std::move(h));
  }

  out.h_reflect.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    ComplexVector h = array_response(config.N, geometry.nu[k], config.spacing_ratio);
    const ComplexVector scattered = complex_gaussian_vector(stream, static_cast<std::size_t>(config.N));
    if (config.pure_los) {
      const double amp = std::sqrt(geometry.rho_r[k]);
      for (Complex& z : h) z *= amp;
    } else {
      const double delta = config.rician_delta;
      const double los_amp = std::sqrt(geometry.rho_r[k] * delta / (delta + 1.0));
      const double nlos_amp = std::sqrt(geometry.rho_r[k] / (delta + 1.0));
      for (std::size_t n = 0; n < h.size(); ++n) h[n] = los_amp * h[n] + nlos_amp * scattered[n];
    }
    out.h_reflect.push_back(std::move(h));
  }
  return out;
}

namespace detail {

inline void require_unit_norm(std::span<const Complex> v, const char* where) {
  if (std::abs(norm(v) - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(where) + ": receive beamformer must have unit norm");
  }
}

}  // namespace detail

/// gamma_k = v^H (h_d,k + G Theta h_r,k) for every device.
inline std::vector<Complex> effective_scalar_channel(const ChannelRealization& realization,
                                                     std::span<const Complex> v,
                                                     const PhaseShiftVector& theta) {
  const std::size_t M = realization.antennas();
  const std::size_t N = realization.elements();
  if (v.size() != M) {
    throw std::invalid_argument("effective_scalar_channel: beamformer has " +
                                std::to_string(v.size()) + " entries, expected M = " +
                                std::to_string(M));
  }
  if (theta.size() != N) {
    throw std::invalid_argument("effective_scalar_channel: phase vector has " +
                                std::to_string(theta.size()) + " entries, expected N = " +
                                std::to_string(N));
  }
  detail::require_unit_norm(v, "effective_scalar_channel");

  const ComplexVector a_r = array_response(static_cast<int>(M), realization.phi_r,
                                           realization.spacing_ratio);
  const ComplexVector a_t = array_response(static_cast<int>(N), realization.phi_t,
                                           realization.spacing_ratio);
  const Complex combiner_gain = std::sqrt(realization.rho_1) * inner(v, a_r);

  // conj(a_t[n]) e^{i theta_n}, shared by all devices
  ComplexVector weights(N);
  for (std::size_t n = 0; n < N; ++n) weights[n] = std::conj(a_t[n]) * theta.coefficient(n);

  std::vector<Complex> gammas(realization.devices());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    Complex reflected{0.0, 0.0};
    const ComplexVector& hr = realization.h_reflect[k];
    for (std::size_t n = 0; n < N; ++n) reflected += weights[n] * hr[n];
    gammas[k] = inner(v, realization.h_direct[k]) + combiner_gain * reflected;
  }
  return gammas;
}

/// gamma_k = v^H h_d,k, the channel seen with no IRS in the path.
inline std::vector<Complex> direct_scalar_channel(const ChannelRealization& realization,
                                                  std::span<const Complex> v) {
  if (v.size() != realization.antennas()) {
    throw std::invalid_argument("direct_scalar_channel: beamformer dimension mismatch");
  }
  detail::require_unit_norm(v, "direct_scalar_channel");
  std::vector<Complex> gammas(realization.devices());
  for (std::size_t k = 0; k < gammas.size(); ++k) gammas[k] = inner(v, realization.h_direct[k]);
  return gammas;
}

}  // namespace aircomp

#endif  // AIRCOMP_CHANNEL_HPP
