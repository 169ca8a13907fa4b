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

#ifndef AIRCOMP_PROTOCOL_HPP
#define AIRCOMP_PROTOCOL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/numerics.hpp"
#include "aircomp/phase_shift.hpp"

namespace aircomp {

/// Raised when a power-control rule would divide by a zero channel gain.
class DegenerateChannelError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class PowerRule { kOptimal, kChannelInversion, kOracle, kFixedPowers };

struct PowerSolution {
  std::vector<double> powers;  // W, original device order
  double eta = 0.0;            // denoising factor
  int critical_number = 0;     // devices forced to full power
  double mse = 0.0;
  PowerRule rule = PowerRule::kOptimal;
};

// ---------------------------------------------------------------------------
// Long-term design: receive beamformer and IRS phases
// ---------------------------------------------------------------------------

/// MRC towards the IRS: a_M(phi_r) / sqrt(M).
inline ComplexVector receive_beamformer(double phi_r, int M, double spacing_ratio = 0.5) {
  ComplexVector v = array_response(M, phi_r, spacing_ratio);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  for (Complex& z : v) z *= scale;
  return v;
}

/// Index of the level in {0, 2pi/L, ...} closest to theta on the circle.
/// Ties go to the smaller level.
inline int nearest_phase_level(double theta, int levels) {
  if (levels < 1) throw std::invalid_argument("nearest_phase_level: levels must be >= 1");
  double wrapped = std::fmod(theta, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  const double step = kTwoPi / levels;
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int l = 0; l < levels; ++l) {
    const double diff = std::abs(wrapped - step * l);
    const double dist = std::min(diff, kTwoPi - diff);
    if (dist < best_dist) {
      best_dist = dist;
      best = l;
    }
  }
  return best;
}

/// Element of the discrete phase set nearest to theta.
inline double quantize_phase(double theta, int levels) {
  return (kTwoPi / levels) * nearest_phase_level(theta, levels);
}

/// How the continuous per-device target phase is formed.
enum class PhaseRule {
  // 2 pi (d/lambda) m (sin phi_t - sin nu_k), m = 0..N-1. Conjugates the
  // two array responses exactly, giving a cascaded gain of N before
  // quantization.
  kArrayConsistent,
  // 2 pi (d/lambda) n (phi_t - nu_k), n = 1..N, kept for A/B comparison only.
  kLiteral,
};

/// Quantized phases that would best serve device k alone.
inline PhaseShiftVector per_device_phases(double phi_t, double nu_k, int N, int L,
                                          double spacing_ratio,
                                          PhaseRule rule = PhaseRule::kArrayConsistent) {
  if (N < 1) throw std::invalid_argument("per_device_phases: N must be >= 1");
  std::vector<int> levels(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) {
    const double target = rule == PhaseRule::kArrayConsistent
                              ? kTwoPi * spacing_ratio * m * (std::sin(phi_t) - std::sin(nu_k))
                              : kTwoPi * spacing_ratio * (m + 1) * (phi_t - nu_k);
    levels[m] = nearest_phase_level(target, L);
  }
  return PhaseShiftVector(L, std::move(levels));
}

/// Per-element plurality vote across devices; ties go to the smaller phase.
inline PhaseShiftVector majority_vote(std::span<const PhaseShiftVector> per_device, int L) {
  if (per_device.empty()) throw std::invalid_argument("majority_vote: empty device set");
  const std::size_t N = per_device.front().size();
  for (const PhaseShiftVector& p : per_device) {
    if (p.size() != N || p.levels() != L) {
      throw std::invalid_argument("majority_vote: per-device vectors disagree on N or L");
    }
  }
  std::vector<int> voted(N);
  std::vector<int> counts(static_cast<std::size_t>(L));
  for (std::size_t n = 0; n < N; ++n) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const PhaseShiftVector& p : per_device) ++counts[p.level(n)];
    voted[n] = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
  return PhaseShiftVector(L, std::move(voted));
}

/// Full statistical-CSI phase design: per-device projection, then vote.
inline PhaseShiftVector design_phases(double phi_t, std::span<const double> nu, int N, int L,
                                      double spacing_ratio,
                                      PhaseRule rule = PhaseRule::kArrayConsistent) {
  std::vector<PhaseShiftVector> prefs;
  prefs.reserve(nu.size());
  for (double angle : nu) prefs.push_back(per_device_phases(phi_t, angle, N, L, spacing_ratio, rule));
  return majority_vote(prefs, L);
}

/// |a_N(phi_t)^H Theta a_N(nu)|^2.
inline double cascaded_array_gain(double phi_t, double nu, const PhaseShiftVector& theta,
                                  double spacing_ratio) {
  const int N = static_cast<int>(theta.size());
  const ComplexVector a_t = array_response(N, phi_t, spacing_ratio);
  const ComplexVector a_k = array_response(N, nu, spacing_ratio);
  Complex acc{0.0, 0.0};
  for (std::size_t n = 0; n < theta.size(); ++n) acc += std::conj(a_t[n]) * theta.coefficient(n) * a_k[n];
  return std::norm(acc);
}

// ---------------------------------------------------------------------------
// Per-block power control
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> channel_gains(std::span<const Complex> gammas, const char* where) {
  if (gammas.empty()) throw std::invalid_argument(std::string(where) + ": no devices");
  std::vector<double> g2(gammas.size());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    g2[k] = std::norm(gammas[k]);
    if (!(g2[k] > 0.0)) {
      throw DegenerateChannelError(std::string(where) + ": device " + std::to_string(k) +
                                   " has a zero effective channel");
    }
  }
  return g2;
}

inline void require_power_args(double p_max, double sigma2, const char* where) {
  if (!(p_max > 0.0)) throw std::invalid_argument(std::string(where) + ": Pmax must be > 0");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument(std::string(where) + ": sigma2 must be >= 0");
}

// sqrt(p g2 / eta) - 1 without cancellation when p g2 is close to eta.
inline double alignment_error(double p, double g2, double eta) {
  const double t = std::fma(p, g2, -eta) / eta;
  return t / (std::sqrt(1.0 + t) + 1.0);
}

}  // namespace detail

/// sum_k (sqrt(p_k) |gamma_k| / sqrt(eta) - 1)^2 + sigma2 / eta.
inline double evaluate_mse(std::span<const Complex> gammas, const PowerSolution& solution,
                           double sigma2) {
  if (!(solution.eta > 0.0)) throw std::invalid_argument("evaluate_mse: eta must be > 0");
  if (solution.powers.size() != gammas.size()) {
    throw std::invalid_argument("evaluate_mse: powers and gammas differ in length");
  }
  CompensatedSum acc;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double e = detail::alignment_error(solution.powers[k], std::norm(gammas[k]), solution.eta);
    acc += e * e;
  }
  acc += sigma2 / solution.eta;
  return acc.value();
}

/// MSE with arbitrary complex transmit scalars b_k and beamformer v.
inline double evaluate_mse_general(std::span<const Complex> v, const PhaseShiftVector& theta,
                                   std::span<const Complex> b, double eta,
                                   const ChannelRealization& realization, double sigma2) {
  if (!(eta > 0.0)) throw std::invalid_argument("evaluate_mse_general: eta must be > 0");
  if (b.size() != realization.devices()) {
    throw std::invalid_argument("evaluate_mse_general: b has " + std::to_string(b.size()) +
                                " entries, expected K = " + std::to_string(realization.devices()));
  }
  const std::vector<Complex> gammas = effective_scalar_channel(realization, v, theta);
  const double scale = 1.0 / std::sqrt(eta);
  CompensatedSum acc;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    acc += std::norm(gammas[k] * b[k] * scale - 1.0);
  }
  const double v_norm = norm(v);
  acc += sigma2 * v_norm * v_norm / eta;
  return acc.value();
}

/// Transmit scalars that co-phase every device: b_k = sqrt(p_k) conj(gamma_k) / |gamma_k|.
inline std::vector<Complex> phase_aligned_scalars(std::span<const Complex> gammas,
                                                  std::span<const double> powers) {
  std::vector<Complex> b(gammas.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    b[k] = std::sqrt(powers[k]) * std::conj(gammas[k]) / std::abs(gammas[k]);
  }
  return b;
}

/// Optimal (p, eta) for fixed gammas: full power for the k~ weakest
/// devices, channel inversion for the rest.
inline PowerSolution optimal_power_control(std::span<const Complex> gammas, double p_max,
                                           double sigma2) {
  detail::require_power_args(p_max, sigma2, "optimal_power_control");
  const std::vector<double> g2 = detail::channel_gains(gammas, "optimal_power_control");
  const std::size_t K = g2.size();

  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&g2](std::size_t a, std::size_t b) { return g2[a] < g2[b]; });

  // eta~_k = ((sigma2 + sum_{j<=k} Pmax g_j) / sum_{j<=k} sqrt(Pmax g_j))^2
  CompensatedSum power_sum;
  CompensatedSum amplitude_sum;
  double eta_star = std::numeric_limits<double>::infinity();
  std::size_t k_tilde = 0;
  for (std::size_t i = 0; i < K; ++i) {
    const double g = g2[order[i]];
    power_sum += p_max * g;
    amplitude_sum += std::sqrt(p_max * g);
    const double ratio = (sigma2 + power_sum.value()) / amplitude_sum.value();
    const double eta_i = ratio * ratio;
    if (eta_i < eta_star) {
      eta_star = eta_i;
      k_tilde = i + 1;
    }
  }

  PowerSolution sol;
  sol.rule = PowerRule::kOptimal;
  sol.eta = eta_star;
  sol.critical_number = static_cast<int>(k_tilde);
  sol.powers.assign(K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    const std::size_t k = order[i];
    sol.powers[k] = i < k_tilde ? p_max : std::min(p_max, eta_star / g2[k]);
  }
  sol.mse = evaluate_mse(gammas, sol, sigma2);
  return sol;
}

/// Every device inverts its channel; the weakest one sits at Pmax.
inline PowerSolution channel_inversion_power_control(std::span<const Complex> gammas, double p_max,
                                                     double sigma2) {
  detail::require_power_args(p_max, sigma2, "channel_inversion_power_control");
  const std::vector<double> g2 = detail::channel_gains(gammas, "channel_inversion_power_control");
  const double g_min = *std::min_element(g2.begin(), g2.end());

  PowerSolution sol;
  sol.rule = PowerRule::kChannelInversion;
  sol.eta = p_max * g_min;
  sol.critical_number = 1;
  sol.powers.resize(g2.size());
  for (std::size_t k = 0; k < g2.size(); ++k) {
    sol.powers[k] = g2[k] == g_min ? p_max : sol.eta / g2[k];
  }
  sol.mse = sigma2 / sol.eta;
  return sol;
}

/// MSE-minimizing eta for fixed powers:
/// eta = ((sum_k p_k g_k + sigma2) / sum_k sqrt(p_k g_k))^2.
inline PowerSolution fixed_power_solution(std::span<const Complex> gammas,
                                          std::span<const double> powers, double sigma2) {
  if (gammas.size() != powers.size() || gammas.empty()) {
    throw std::invalid_argument("fixed_power_solution: powers and gammas differ in length");
  }
  CompensatedSum power_sum;
  CompensatedSum amplitude_sum;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double pg = powers[k] * std::norm(gammas[k]);
    power_sum += pg;
    amplitude_sum += std::sqrt(pg);
  }
  if (!(amplitude_sum.value() > 0.0)) {
    throw DegenerateChannelError("fixed_power_solution: no received signal");
  }
  const double ratio = (power_sum.value() + sigma2) / amplitude_sum.value();
  PowerSolution sol;
  sol.rule = PowerRule::kFixedPowers;
  sol.powers.assign(powers.begin(), powers.end());
  sol.eta = ratio * ratio;
  const double p_top = *std::max_element(powers.begin(), powers.end());
  sol.critical_number = static_cast<int>(std::count(powers.begin(), powers.end(), p_top));
  sol.mse = evaluate_mse(gammas, sol, sigma2);
  return sol;
}

/// Independent check on optimal_power_control. For a fixed eta the best
/// feasible power is p_k = min(Pmax, eta / g_k), which leaves
///   f(x) = sum_k max(0, 1 - sqrt(Pmax g_k) x)^2 + sigma2 x^2,  x = 1/sqrt(eta),
/// a convex function on x in [0, 1/sqrt(Pmax g_min)]. A dense grid over x
/// brackets the minimum and golden-section search refines it.
inline PowerSolution oracle_power_control(std::span<const Complex> gammas, double p_max,
                                          double sigma2, int grid_resolution = 4096) {
  detail::require_power_args(p_max, sigma2, "oracle_power_control");
  if (grid_resolution < 2) throw std::invalid_argument("oracle_power_control: grid too coarse");
  const std::vector<double> g2 = detail::channel_gains(gammas, "oracle_power_control");

  std::vector<double> amp(g2.size());
  for (std::size_t k = 0; k < g2.size(); ++k) amp[k] = std::sqrt(p_max * g2[k]);
  const double x_max = 1.0 / *std::min_element(amp.begin(), amp.end());

  auto objective = [&amp, sigma2](double x) {
    CompensatedSum acc;
    for (double a : amp) {
      const double r = std::max(0.0, 1.0 - a * x);
      acc += r * r;
    }
    acc += sigma2 * x * x;
    return acc.value();
  };

  const double h = x_max / grid_resolution;
  int best_i = grid_resolution;
  double best_f = objective(x_max);
  for (int i = grid_resolution - 1; i >= 0; --i) {
    const double f = objective(h * i);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  const double lo = h * std::max(best_i - 1, 0);
  const double hi = h * std::min(best_i + 1, grid_resolution);
  const ScalarMinimum refined = golden_section_minimize(objective, lo, hi, x_max * 1e-15);
  double x = refined.value <= best_f ? refined.x : h * best_i;
  if (!(x > 0.0)) x = std::numeric_limits<double>::min();  // eta must stay finite

  PowerSolution sol;
  sol.rule = PowerRule::kOracle;
  sol.eta = 1.0 / (x * x);
  sol.powers.resize(g2.size());
  for (std::size_t k = 0; k < g2.size(); ++k) {
    const double inverting = sol.eta / g2[k];
    if (inverting >= p_max) {
      sol.powers[k] = p_max;
      ++sol.critical_number;
    } else {
      sol.powers[k] = inverting;
    }
  }
  sol.mse = evaluate_mse(gammas, sol, sigma2);
  return sol;
}

}  // namespace aircomp

#endif  // AIRCOMP_PROTOCOL_HPP
