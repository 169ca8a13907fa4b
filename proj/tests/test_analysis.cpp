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


#include <cmath>

#include <gtest/gtest.h>

#include "aircomp/analysis.hpp"
#include "aircomp/protocol.hpp"

using namespace aircomp;

TEST(Lambda1, SmallK) {
  EXPECT_DOUBLE_EQ(lambda1(1), 1.0);
  EXPECT_DOUBLE_EQ(lambda1(3), 0.75);
  EXPECT_DOUBLE_EQ(lambda1(5), 11.0 / 16.0);
  EXPECT_THROW(lambda1(0), std::invalid_argument);
}

TEST(Lambda1, MatchesSimulatedVote) {
  // Odd and even K: fraction of elements where a device's bit wins the
  // vote when every device picks 0/1 uniformly, ties to level 0.
  RngStream r(2, 0);
  for (int K : {2, 4, 7, 21}) {
    const int trials = 200000;
    int wins = 0;
    for (int t = 0; t < trials; ++t) {
      int ones = 0;
      const int mine = static_cast<int>(r.next_u64() & 1);
      ones += mine;
      for (int j = 1; j < K; ++j) ones += static_cast<int>(r.next_u64() & 1);
      const int voted = 2 * ones > K ? 1 : 0;
      wins += voted == mine;
    }
    EXPECT_NEAR(static_cast<double>(wins) / trials, lambda1(K), 0.005) << "K=" << K;
  }
}

TEST(Lambda1, LargeKUsesLogSpace) {
  EXPECT_NEAR(lambda1(21), 0.5880985260009766, 1e-15);
  const double l101 = lambda1(101);
  EXPECT_GT(l101, 0.5);
  EXPECT_LT(l101, lambda1(21));
  // 1/2 + C(K-1,(K-1)/2)/2^K
  EXPECT_NEAR(l101, 0.5 + 0.5 * 0.07958923738717877, 1e-12);
}

TEST(ApproxArrayGain, Examples) {
  EXPECT_NEAR(approx_array_gain(1, 1), 8.0 / (kPi * kPi * kPi), 1e-15);
  EXPECT_NEAR(approx_array_gain(20, 3) / approx_array_gain(10, 3), 4.0, 1e-12);
  EXPECT_NEAR(approx_array_gain(10, 6) / approx_array_gain(10, 3), 0.5, 1e-12);
}

TEST(MseUpperBound, Examples) {
  AsymptoticParams p{1, 10, 2, 1.0, 1.0, 1.0, 0.9};
  EXPECT_NEAR(mse_upper_bound(p), kPi * kPi * kPi / 400.0, 1e-15);
  AsymptoticParams q = p;
  q.N = 20;
  EXPECT_NEAR(mse_upper_bound(q), mse_upper_bound(p) / 4.0, 1e-15);
  q.sigma2 = 0.0;
  EXPECT_EQ(mse_upper_bound(q), 0.0);
}

TEST(NThreshold, Examples) {
  AsymptoticParams p{1, 10, 2, 1.0, 1.0, 1.0, 0.25};
  EXPECT_NEAR(n_threshold(p, 1.0), std::sqrt(kPi * kPi * kPi / 4.0), 1e-12);
  p.epsilon = 1.0 - 1e-12;
  EXPECT_GT(n_threshold(p, 1.0), 1e5);
  p.epsilon = 0.5;
  p.sigma2 = 0.0;
  EXPECT_EQ(n_threshold(p, 1.0), 0.0);
  p.epsilon = 1.0;
  EXPECT_THROW(n_threshold(p, 1.0), std::invalid_argument);
}

TEST(MseLowerBound, Examples) {
  EXPECT_DOUBLE_EQ(mse_lower_bound(1.0, 1.0, 1.0), 0.25);
  EXPECT_EQ(mse_lower_bound(1.0, 1.0, 0.0), 0.0);
  EXPECT_LT(mse_lower_bound(1e12, 1.0, 1.0), 1e-11);
}

TEST(MseLowerBound, BelowOptimalMse) {
  RngStream r(4, 0);
  for (int i = 0; i < 200; ++i) {
    std::vector<Complex> g;
    const int K = 1 + static_cast<int>(r.next_u64() % 6);
    for (int k = 0; k < K; ++k) g.emplace_back(std::pow(10.0, r.uniform(-1.0, 1.0)), 0.0);
    const double sigma2 = r.uniform(0.01, 2.0);
    double g1 = 1e300;
    for (const Complex& z : g) g1 = std::min(g1, std::norm(z));
    EXPECT_LE(mse_lower_bound(g1, 1.0, sigma2), optimal_power_control(g, 1.0, sigma2).mse * (1 + 1e-12));
  }
}

TEST(MinGammaSqApprox, Examples) {
  AsymptoticParams p{1, 1, 1, 1.0, 1.0, 1.0, 0.9};
  EXPECT_NEAR(min_gamma_sq_approx(p, 1.0), 8.0 / (kPi * kPi * kPi), 1e-15);
  AsymptoticParams q = p;
  q.M = 5;
  EXPECT_NEAR(min_gamma_sq_approx(q, 1.0), 5.0 * min_gamma_sq_approx(p, 1.0), 1e-14);
  q = p;
  q.N = 3;
  EXPECT_NEAR(min_gamma_sq_approx(q, 1.0), 9.0 * min_gamma_sq_approx(p, 1.0), 1e-14);
}

TEST(GroupSplit, Examples) {
  const PhaseShiftVector a(2, {0, 1, 1, 0});
  const PhaseShiftVector flipped(2, {1, 0, 0, 1});
  const GroupSplit same = group_split(a, a);
  EXPECT_EQ(same.matched, 4);
  EXPECT_EQ(same.mismatched, 0);
  const GroupSplit none = group_split(a, flipped);
  EXPECT_EQ(none.matched, 0);
  EXPECT_EQ(none.mismatched, 4);
  EXPECT_THROW(group_split(a, PhaseShiftVector::zeros(3, 2)), std::invalid_argument);
}
