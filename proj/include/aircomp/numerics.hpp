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

#ifndef AIRCOMP_NUMERICS_HPP
#define AIRCOMP_NUMERICS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aircomp {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neumaier variant of Kahan summation. Order of add() calls still matters
// in the last bit, so callers that need run-to-run identity must also fix
// the order.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Euclidean norm of a complex vector.
inline double norm(std::span<const Complex> x) {
  CompensatedSum acc;
  for (const Complex& z : x) acc += std::norm(z);
  return std::sqrt(acc.value());
}

/// Hermitian inner product a^H b.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("inner: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

/// A reproducible random stream identified by (seed, stream_id).
///
/// Each Monte Carlo trial owns one stream, so trials can run in any order
/// or on any thread and still see the same draws. The engine is the
/// standard-specified mt19937_64 keyed through seed_seq, and all variates
/// are produced here from raw 64-bit words, so sequences are identical
/// across standard library implementations.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

  /// Circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
  Complex complex_normal() {
    // Box-Muller: sqrt(-ln u) instead of sqrt(-2 ln u) gives variance 1/2.
    const double radius = std::sqrt(-std::log(uniform_open()));
    const double angle = kTwoPi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// ULA steering vector; entry m is exp(i 2 pi (d/lambda) m sin(angle)).
inline ComplexVector array_response(int n_elems, double angle, double spacing_ratio) {
  if (n_elems < 1) {
    throw std::invalid_argument("array_response: n_elems must be positive, got " +
                                std::to_string(n_elems));
  }
  if (!(spacing_ratio > 0.0)) {
    throw std::invalid_argument("array_response: spacing_ratio must be positive");
  }
  const double step = kTwoPi * spacing_ratio * std::sin(angle);
  ComplexVector out(static_cast<std::size_t>(n_elems));
  out[0] = Complex{1.0, 0.0};
  for (int m = 1; m < n_elems; ++m) out[m] = std::polar(1.0, step * m);
  return out;
}

inline ComplexVector complex_gaussian_vector(RngStream& stream, std::size_t dim) {
  ComplexVector out(dim);
  for (Complex& z : out) z = stream.complex_normal();
  return out;
}

/// sin(pi x) / (pi x), with the removable singularity filled in.
inline double sinc_normalized(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

struct ScalarMinimum {
  double x;
  double value;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
template <typename F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double x_tol,
                                      int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && (b - a) > x_tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum best{c, fc};
  if (fd < best.value) best = {d, fd};
  for (double edge : {a, b}) {
    const double fe = f(edge);
    if (fe < best.value) best = {edge, fe};
  }
  return best;
}

}  // namespace aircomp

#endif  // AIRCOMP_NUMERICS_HPP
