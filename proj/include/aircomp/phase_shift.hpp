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

#ifndef AIRCOMP_PHASE_SHIFT_HPP
#define AIRCOMP_PHASE_SHIFT_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aircomp/numerics.hpp"

namespace aircomp {

/// Discrete IRS configuration: one level index per element, each selecting
/// a phase from {0, 2pi/L, ..., (L-1) 2pi/L}. Storing indices keeps every
/// phase an exact multiple of the quantization step.
class PhaseShiftVector {
public:
  PhaseShiftVector(int levels, std::vector<int> level_indices)
      : levels_(levels), indices_(std::move(level_indices)) {
    if (levels_ < 1) {
      throw std::invalid_argument("PhaseShiftVector: levels must be >= 1, got " +
                                  std::to_string(levels_));
    }
    for (int idx : indices_) {
      if (idx < 0 || idx >= levels_) {
        throw std::invalid_argument("PhaseShiftVector: level index " + std::to_string(idx) +
                                    " outside [0, " + std::to_string(levels_) + ")");
      }
    }
  }

  /// All elements at phase 0.
  static PhaseShiftVector zeros(int n_elems, int levels) {
    return PhaseShiftVector(levels, std::vector<int>(static_cast<std::size_t>(n_elems), 0));
  }

  int levels() const { return levels_; }
  std::size_t size() const { return indices_.size(); }
  double step() const { return kTwoPi / levels_; }

  int level(std::size_t n) const { return indices_[n]; }
  double phase(std::size_t n) const { return step() * indices_[n]; }
  Complex coefficient(std::size_t n) const { return std::polar(1.0, phase(n)); }

  const std::vector<int>& level_indices() const { return indices_; }

  bool operator==(const PhaseShiftVector&) const = default;

private:
  int levels_;
  std::vector<int> indices_;
};

}  // namespace aircomp

#endif  // AIRCOMP_PHASE_SHIFT_HPP
