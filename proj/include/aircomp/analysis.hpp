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

#ifndef AIRCOMP_ANALYSIS_HPP
#define AIRCOMP_ANALYSIS_HPP

// Closed-form asymptotics for pure-LoS device-IRS links with no direct
// path. The bounds assume 1-bit phases (L = 2); the simulator accepts any
// L but these expressions are only meaningful for L = 2.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "aircomp/numerics.hpp"
#include "aircomp/phase_shift.hpp"

namespace aircomp {

struct AsymptoticParams {
  int M = 10;
  int N = 64;
  int K = 20;
  double p_max = 0.1;
  double sigma2 = 1e-11;
  double rho_min = 1.0;  // rho_1 * min_k rho_r,k
  double epsilon = 0.9;  // target MSE_o / MSE_c
};

namespace detail {

// C(n, k) / 2^n, exact integer arithmetic up to n = 59, log-space beyond.
inline double binomial_half_pmf(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 59) {
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return std::ldexp(static_cast<double>(c), -n);
  }
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_c - n * std::log(2.0));
}

inline double sinc_half_sq() {
  const double s = sinc_normalized(0.5);
  return s * s;
}

}  // namespace detail

/// Probability that an element's voted phase equals a given device's own
/// preference, when the other K-1 devices vote independently and evenly.
/// For even K the K-1 others can split so that the device ties; half of
/// that mass is credited, matching a symmetric tie-break on average.
inline double lambda1(int K) {
  if (K < 1) throw std::invalid_argument("lambda1: K must be >= 1");
  const int others = K - 1;
  const int first = (others + 1) / 2;  // ceil((K-1)/2)
  double p = 0.0;
  for (int j = first; j <= others; ++j) p += detail::binomial_half_pmf(others, j);
  if (K % 2 == 0) {
    // tie when 1 + j = others - j
    p += 0.5 * detail::binomial_half_pmf(others, (others - 1) / 2);
  }
  return p;
}

/// Asymptotic cascaded gain |a_N^H Theta a_N(nu)|^2 ~ (2 N^2 / (pi K)) sinc^2(1/2).
inline double approx_array_gain(int N, int K) {
  const double n = N;
  return 2.0 * n * n / (kPi * K) * detail::sinc_half_sq();
}

/// Channel-inversion MSE with the asymptotic gain substituted.
inline double mse_upper_bound(const AsymptoticParams& p) {
  const double n = p.N;
  return kPi * p.K * p.sigma2 /
         (2.0 * p.p_max * p.rho_min * detail::sinc_half_sq() * p.M * n * n);
}

/// Smallest N for which MSE_o / MSE_c >= epsilon is guaranteed.
inline double n_threshold(const AsymptoticParams& p, double rho_1_rho_r1) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
    throw std::invalid_argument("n_threshold: epsilon must lie in (0, 1)");
  }
  if (!(rho_1_rho_r1 > 0.0)) throw std::invalid_argument("n_threshold: path loss must be > 0");
  const double root_eps = std::sqrt(p.epsilon);
  return std::sqrt(kPi * p.K * root_eps * p.sigma2 /
                   (2.0 * rho_1_rho_r1 * p.M * p.p_max * (1.0 - root_eps) * detail::sinc_half_sq()));
}

/// sigma2 / eta~_1: no power policy can beat the weakest device alone.
inline double mse_lower_bound(double gamma1_sq, double p_max, double sigma2) {
  if (!(gamma1_sq > 0.0)) throw std::invalid_argument("mse_lower_bound: gamma1_sq must be > 0");
  const double denom = sigma2 + p_max * gamma1_sq;
  return p_max * sigma2 * gamma1_sq / (denom * denom);
}

/// Asymptotic |gamma_1|^2 for the weakest device.
inline double min_gamma_sq_approx(const AsymptoticParams& p, double rho_1_rho_r1) {
  const double n = p.N;
  return 2.0 * rho_1_rho_r1 * detail::sinc_half_sq() / (kPi * p.K) * p.M * n * n;
}

struct GroupSplit {
  int matched = 0;     // elements whose voted phase is the device's own choice
  int mismatched = 0;
};

inline GroupSplit group_split(const PhaseShiftVector& theta_star, const PhaseShiftVector& theta_k) {
  if (theta_star.size() != theta_k.size() || theta_star.levels() != theta_k.levels()) {
    throw std::invalid_argument("group_split: phase vectors disagree on N or L");
  }
  GroupSplit s;
  for (std::size_t n = 0; n < theta_star.size(); ++n) {
    if (theta_star.level(n) == theta_k.level(n)) {
      ++s.matched;
    } else {
      ++s.mismatched;
    }
  }
  return s;
}

}  // namespace aircomp

#endif  // AIRCOMP_ANALYSIS_HPP
