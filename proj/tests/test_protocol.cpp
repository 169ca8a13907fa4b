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

#include "aircomp/protocol.hpp"

using namespace aircomp;

namespace {

std::vector<Complex> real_gammas(std::initializer_list<double> mags) {
  std::vector<Complex> g;
  for (double m : mags) g.emplace_back(m, 0.0);
  return g;
}

}  // namespace

TEST(ReceiveBeamformer, Examples) {
  EXPECT_EQ(receive_beamformer(0.8, 1), ComplexVector{Complex(1.0, 0.0)});
  for (const Complex& z : receive_beamformer(0.0, 4)) EXPECT_NEAR(std::abs(z - 0.5), 0.0, 1e-15);
  const auto v = receive_beamformer(kPi / 2, 2);
  EXPECT_NEAR(v[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v[1].real(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(norm(receive_beamformer(1.1, 10)), 1.0, 1e-14);
}

TEST(QuantizePhase, Examples) {
  EXPECT_EQ(quantize_phase(0.3 * kPi, 2), 0.0);
  EXPECT_DOUBLE_EQ(quantize_phase(0.6 * kPi, 2), kPi);
  EXPECT_EQ(quantize_phase(1.99 * kPi, 2), 0.0);
  EXPECT_EQ(quantize_phase(-0.01, 2), 0.0);
  EXPECT_DOUBLE_EQ(quantize_phase(0.26 * kPi, 4), kPi / 2);
}

TEST(QuantizePhase, TieGoesToSmallerLevel) {
  EXPECT_EQ(nearest_phase_level(kPi / 2, 2), 0);
  EXPECT_EQ(nearest_phase_level(kPi / 4, 4), 0);
}

TEST(QuantizePhase, OutputOnGrid) {
  RngStream r(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const int L = 1 + static_cast<int>(r.next_u64() % 8);
    const double q = quantize_phase(r.uniform(-20.0, 20.0), L);
    const double steps = q / (kTwoPi / L);
    EXPECT_EQ(steps, std::round(steps));
    EXPECT_GE(q, 0.0);
    EXPECT_LT(q, kTwoPi);
  }
}

TEST(PerDevicePhases, Examples) {
  const auto same = per_device_phases(0.4, 0.4, 16, 2, 0.5);
  EXPECT_EQ(same, PhaseShiftVector::zeros(16, 2));
  EXPECT_EQ(per_device_phases(0.1, 1.2, 1, 2, 0.5), PhaseShiftVector::zeros(1, 2));
  // sin(pi/2) - sin(0) = 1
  const auto flip = per_device_phases(kPi / 2, 0.0, 2, 2, 0.5);
  EXPECT_EQ(flip.level(0), 0);
  EXPECT_EQ(flip.level(1), 1);
}

TEST(PerDevicePhases, ContinuousPhasesConjugateArrays) {
  // L large enough that quantization is negligible: cascaded gain -> N^2
  const int N = 64;
  const auto theta = per_device_phases(0.5, -0.3, N, 4096, 0.5);
  EXPECT_NEAR(cascaded_array_gain(0.5, -0.3, theta, 0.5) / (N * N), 1.0, 1e-4);
}

TEST(MajorityVote, Examples) {
  const std::vector<PhaseShiftVector> strict{PhaseShiftVector(2, {0}), PhaseShiftVector(2, {0}),
                                             PhaseShiftVector(2, {1})};
  EXPECT_EQ(majority_vote(strict, 2).level(0), 0);
  const std::vector<PhaseShiftVector> tie{PhaseShiftVector(2, {1}), PhaseShiftVector(2, {0})};
  EXPECT_EQ(majority_vote(tie, 2).level(0), 0);
  const PhaseShiftVector p(4, {3, 1, 2, 0});
  const std::vector<PhaseShiftVector> same{p, p, p};
  EXPECT_EQ(majority_vote(same, 4), p);
  EXPECT_THROW(majority_vote(std::vector<PhaseShiftVector>{}, 2), std::invalid_argument);
}

TEST(MajorityVote, PluralityWithThreeLevels) {
  const std::vector<PhaseShiftVector> votes{PhaseShiftVector(3, {2}), PhaseShiftVector(3, {1}),
                                            PhaseShiftVector(3, {2}), PhaseShiftVector(3, {0})};
  EXPECT_EQ(majority_vote(votes, 3).level(0), 2);
}

TEST(OptimalPowerControl, SingleDevice) {
  const auto g = real_gammas({1.0});
  const PowerSolution s = optimal_power_control(g, 1.0, 1.0);
  EXPECT_NEAR(s.eta, 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(s.powers[0], 1.0);
  EXPECT_NEAR(s.mse, 0.5, 1e-14);
  EXPECT_EQ(s.critical_number, 1);
}

TEST(OptimalPowerControl, TwoDevicesNoiseFree) {
  const auto g = real_gammas({1.0, 2.0});
  const PowerSolution s = optimal_power_control(g, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(s.eta, 1.0);
  EXPECT_EQ(s.critical_number, 1);
  EXPECT_DOUBLE_EQ(s.powers[0], 1.0);
  EXPECT_DOUBLE_EQ(s.powers[1], 0.25);
  EXPECT_NEAR(s.mse, 0.0, 1e-30);
}

TEST(OptimalPowerControl, TwoDevicesTiedThresholds) {
  const auto g = real_gammas({1.0, 2.0});
  const PowerSolution s = optimal_power_control(g, 1.0, 1.0);
  EXPECT_NEAR(s.eta, 4.0, 1e-14);
  EXPECT_EQ(s.critical_number, 1);
  EXPECT_DOUBLE_EQ(s.powers[0], 1.0);
  EXPECT_NEAR(s.powers[1], 1.0, 1e-14);
  EXPECT_NEAR(s.mse, 0.5, 1e-14);
}

TEST(OptimalPowerControl, OriginalOrderPreserved) {
  const auto g = real_gammas({2.0, 1.0});
  const PowerSolution s = optimal_power_control(g, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(s.powers[0], 0.25);
  EXPECT_DOUBLE_EQ(s.powers[1], 1.0);
}

TEST(OptimalPowerControl, PhaseOfGammaIrrelevant) {
  const std::vector<Complex> a{{0.0, 1.0}, {-2.0, 0.0}};
  const PowerSolution s = optimal_power_control(a, 1.0, 1.0);
  EXPECT_NEAR(s.mse, 0.5, 1e-14);
}

TEST(OptimalPowerControl, RejectsDegenerateInput) {
  EXPECT_THROW(optimal_power_control(real_gammas({1.0, 0.0}), 1.0, 1.0), DegenerateChannelError);
  EXPECT_THROW(optimal_power_control(real_gammas({1.0}), 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(optimal_power_control(real_gammas({1.0}), 1.0, -1.0), std::invalid_argument);
  EXPECT_THROW(optimal_power_control(std::vector<Complex>{}, 1.0, 1.0), std::invalid_argument);
}

TEST(ChannelInversion, Examples) {
  const auto g = real_gammas({1.0, 2.0});
  const PowerSolution s = channel_inversion_power_control(g, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.eta, 1.0);
  EXPECT_DOUBLE_EQ(s.powers[0], 1.0);
  EXPECT_DOUBLE_EQ(s.powers[1], 0.25);
  EXPECT_DOUBLE_EQ(s.mse, 1.0);
  EXPECT_EQ(s.critical_number, 1);

  const PowerSolution eq = channel_inversion_power_control(real_gammas({0.3, 0.3, 0.3}), 2.0, 1.0);
  for (double p : eq.powers) EXPECT_DOUBLE_EQ(p, 2.0);
  EXPECT_EQ(channel_inversion_power_control(g, 1.0, 0.0).mse, 0.0);
}

TEST(EvaluateMse, Examples) {
  const auto g = real_gammas({1.0, 2.0});
  PowerSolution aligned;
  aligned.eta = 2.0;
  aligned.powers = {2.0, 0.5};
  EXPECT_NEAR(evaluate_mse(g, aligned, 3.0), 1.5, 1e-15);

  PowerSolution silent;
  silent.eta = 2.0;
  silent.powers = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(evaluate_mse(g, silent, 3.0), 2.0 + 1.5);

  EXPECT_NEAR(evaluate_mse(g, optimal_power_control(g, 1.0, 1.0), 1.0), 0.5, 1e-14);
  EXPECT_THROW(evaluate_mse(g, PowerSolution{}, 1.0), std::invalid_argument);
}

TEST(FixedPowerSolution, EtaMinimizesMseForGivenPowers) {
  const auto g = real_gammas({0.5, 1.0, 3.0});
  const std::vector<double> p{1.0, 0.7, 0.2};
  const PowerSolution s = fixed_power_solution(g, p, 0.3);
  for (double f : {0.9, 0.99, 1.01, 1.1}) {
    PowerSolution other = s;
    other.eta = s.eta * f;
    EXPECT_GT(evaluate_mse(g, other, 0.3), s.mse);
  }
  EXPECT_EQ(s.critical_number, 1);
}

TEST(Oracle, MatchesClosedFormExamples) {
  const PowerSolution one = oracle_power_control(real_gammas({1.0}), 1.0, 1.0);
  EXPECT_NEAR(one.eta, 4.0, 1e-6);
  EXPECT_NEAR(one.mse, 0.5, 1e-12);
  const PowerSolution quiet = oracle_power_control(real_gammas({1.0, 2.0, 5.0}), 1.0, 0.0);
  EXPECT_NEAR(quiet.mse, 0.0, 1e-12);
}

TEST(Oracle, LowSnrMinimumInFirstGridCell) {
  // x* = 1/sqrt(eta*) sits below the first grid point here
  const std::vector<Complex> g{{std::sqrt(0.000212012), 0.0}};
  const double a = optimal_power_control(g, 1.0, 1.0).mse;
  EXPECT_NEAR(oracle_power_control(g, 1.0, 1.0).mse, a, 1e-12 * a);
}

TEST(Oracle, AgreesWithClosedFormOnRandomInstances) {
  RngStream r(21, 0);
  for (int i = 0; i < 50; ++i) {
    const int K = 1 + static_cast<int>(r.next_u64() % 8);
    std::vector<Complex> g;
    for (int k = 0; k < K; ++k) g.push_back(std::polar(std::pow(10.0, r.uniform(-2.0, 2.0)), r.uniform(0.0, 6.0)));
    const double sigma2 = std::pow(10.0, r.uniform(-3.0, 1.0));
    const double a = optimal_power_control(g, 1.0, sigma2).mse;
    const double b = oracle_power_control(g, 1.0, sigma2).mse;
    EXPECT_LE(a, b * (1.0 + 1e-9));
    EXPECT_NEAR(a, b, 1e-7 * b);
  }
}

namespace {

ChannelRealization small_realization(RngStream& r, int M, int N, int K) {
  ChannelRealization h;
  h.rho_1 = 0.8;
  h.phi_r = 0.3;
  h.phi_t = -0.5;
  for (int k = 0; k < K; ++k) {
    h.h_direct.push_back(complex_gaussian_vector(r, static_cast<std::size_t>(M)));
    h.h_reflect.push_back(complex_gaussian_vector(r, static_cast<std::size_t>(N)));
  }
  return h;
}

}  // namespace

TEST(EvaluateMseGeneral, Examples) {
  RngStream r(31, 0);
  const ChannelRealization h = small_realization(r, 3, 5, 4);
  const auto v = receive_beamformer(0.3, 3);
  const PhaseShiftVector theta(2, {0, 1, 1, 0, 1});
  const std::vector<Complex> zeros(4);
  EXPECT_DOUBLE_EQ(evaluate_mse_general(v, theta, zeros, 2.0, h, 0.6), 4.0 + 0.3);

  const auto gam = effective_scalar_channel(h, v, theta);
  std::vector<Complex> inv(4);
  for (std::size_t k = 0; k < 4; ++k) inv[k] = std::sqrt(2.0) / gam[k];
  EXPECT_NEAR(evaluate_mse_general(v, theta, inv, 2.0, h, 0.0), 0.0, 1e-28);

  const PowerSolution s = optimal_power_control(gam, 1.0, 0.6);
  const auto b = phase_aligned_scalars(gam, s.powers);
  EXPECT_NEAR(evaluate_mse_general(v, theta, b, s.eta, h, 0.6), evaluate_mse(gam, s, 0.6), 1e-12 * s.mse);
  EXPECT_THROW(evaluate_mse_general(v, theta, std::vector<Complex>(3), 2.0, h, 0.6), std::invalid_argument);
}

TEST(CascadedGain, LiteralRuleIsWorseOffBroadside) {
  // The literal rule linearizes sin(); far from broadside it misaligns.
  const int N = 128;
  const auto consistent = per_device_phases(1.0, -0.8, N, 2, 0.5, PhaseRule::kArrayConsistent);
  const auto literal = per_device_phases(1.0, -0.8, N, 2, 0.5, PhaseRule::kLiteral);
  EXPECT_GT(cascaded_array_gain(1.0, -0.8, consistent, 0.5), cascaded_array_gain(1.0, -0.8, literal, 0.5));
}
