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

#include "aircomp/channel.hpp"
#include "aircomp/protocol.hpp"

using namespace aircomp;

TEST(Pathloss, ReferenceDistance) {
  EXPECT_DOUBLE_EQ(pathloss(1.0, 2.2, 1e-3), 1e-3);
  EXPECT_NEAR(pathloss(10.0, 2.2, 1e-3), 6.309573444801929e-06, 1e-18);
  EXPECT_DOUBLE_EQ(pathloss(5.0, 0.0, 1e-3), 1e-3);
}

TEST(Pathloss, ClampsBelowOneMetre) {
  const PathlossResult r = pathloss_checked(0.25, 3.8, 1e-3);
  EXPECT_TRUE(r.clamped);
  EXPECT_DOUBLE_EQ(r.gain, 1e-3);
  EXPECT_FALSE(pathloss_checked(1.0, 3.8, 1e-3).clamped);
}

TEST(SystemConfig, ValidationNamesTheField) {
  SystemConfig c;
  c.K = 0;
  try {
    validate(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("K"), std::string::npos);
  }
  c = SystemConfig{};
  c.ref_loss_linear = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  c = SystemConfig{};
  c.nu = {0.1, 0.2};
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Geometry, ReferencePositions) {
  SystemConfig c;
  RngStream s(1, 0);
  const Geometry g = make_geometry(c, s);
  EXPECT_NEAR(g.rho_1, pathloss(10.0, 2.2, 1e-3), 1e-20);
  ASSERT_EQ(g.rho_d.size(), 20u);
  for (std::size_t k = 0; k < 20; ++k) {
    const double d = distance(g.device_positions[k], c.disk_center);
    EXPECT_LE(d, c.disk_radius + 1e-9);
    EXPECT_GT(g.rho_r[k], 0.0);
    EXPECT_LE(g.rho_r[k], 1.0);
    EXPECT_GT(g.nu[k], -kPi / 2);
    EXPECT_LT(g.nu[k], kPi / 2);
  }
  EXPECT_EQ(g.near_field_clamps, 0);
}

TEST(Geometry, ZeroRadiusGivesEqualDirectLoss) {
  SystemConfig c;
  c.disk_radius = 0.0;
  RngStream s(2, 0);
  const Geometry g = make_geometry(c, s);
  for (double r : g.rho_d) EXPECT_DOUBLE_EQ(r, pathloss(200.0, 3.8, 1e-3));
}

TEST(Geometry, DeterministicAndOverridable) {
  SystemConfig c;
  c.K = 3;
  RngStream a(5, 9);
  RngStream b(5, 9);
  const Geometry ga = make_geometry(c, a);
  const Geometry gb = make_geometry(c, b);
  EXPECT_EQ(ga.nu, gb.nu);
  EXPECT_EQ(ga.rho_r, gb.rho_r);
  EXPECT_EQ(ga.phi_t, gb.phi_t);

  c.phi_t = 0.25;
  c.nu = {0.1, -0.2, 0.3};
  RngStream s(5, 9);
  const Geometry go = make_geometry(c, s);
  EXPECT_EQ(go.phi_t, 0.25);
  EXPECT_EQ(go.nu, c.nu);
  EXPECT_EQ(go.rho_r, ga.rho_r);  // positions unaffected by angle overrides
}

TEST(Geometry, BlockedDirectLinks) {
  SystemConfig c;
  c.block_direct = true;
  RngStream s(1, 1);
  const Geometry g = make_geometry(c, s);
  for (double r : g.rho_d) EXPECT_EQ(r, 0.0);
  const ChannelRealization h = sample_channels(g, c, s);
  for (const auto& hd : h.h_direct) {
    for (const Complex& z : hd) EXPECT_EQ(z, Complex(0.0, 0.0));
  }
}

TEST(SampleChannels, PureLosIsScaledSteeringVector) {
  SystemConfig c;
  c.K = 2;
  c.N = 16;
  c.pure_los = true;
  RngStream s(3, 0);
  const Geometry g = make_geometry(c, s);
  const ChannelRealization h = sample_channels(g, c, s);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto a = array_response(16, g.nu[k], 0.5);
    for (std::size_t n = 0; n < 16; ++n) {
      EXPECT_EQ(h.h_reflect[k][n], std::sqrt(g.rho_r[k]) * a[n]);
    }
  }
}

TEST(SampleChannels, DrawCountIndependentOfFlags) {
  SystemConfig c;
  c.K = 3;
  RngStream s(4, 0);
  const Geometry g = make_geometry(c, s);
  SystemConfig los = c;
  los.pure_los = true;
  RngStream a(4, 1);
  RngStream b(4, 1);
  (void)sample_channels(g, c, a);
  (void)sample_channels(g, los, b);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(SampleChannels, ReflectedEnergyMatchesPathloss) {
  SystemConfig c;
  c.K = 1;
  c.N = 8;
  c.M = 1;
  c.rician_delta = 1.0;
  Geometry g;
  g.phi_r = 0.1;
  g.phi_t = -0.4;
  g.nu = {0.7};
  g.rho_1 = 1.0;
  g.rho_r = {0.3};
  g.rho_d = {0.5};
  RngStream s(6, 0);
  CompensatedSum er;
  CompensatedSum ed;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const ChannelRealization h = sample_channels(g, c, s);
    er += std::pow(norm(h.h_reflect[0]), 2);
    ed += std::norm(h.h_direct[0][0]);
  }
  EXPECT_NEAR(er.value() / draws / (8 * 0.3), 1.0, 0.02);
  EXPECT_NEAR(ed.value() / draws / 0.5, 1.0, 0.02);
}

namespace {

ChannelRealization los_realization(int M, int N, double phi_r, double phi_t, std::vector<double> nu) {
  SystemConfig c;
  c.M = M;
  c.N = N;
  c.K = static_cast<int>(nu.size());
  c.pure_los = true;
  c.block_direct = true;
  Geometry g;
  g.phi_r = phi_r;
  g.phi_t = phi_t;
  g.nu = std::move(nu);
  g.rho_1 = 0.5;
  g.rho_r.assign(g.nu.size(), 0.25);
  g.rho_d.assign(g.nu.size(), 0.0);
  RngStream s(0, 0);
  return sample_channels(g, c, s);
}

}  // namespace

TEST(EffectiveChannel, AlignedLosGain) {
  const int M = 4;
  const int N = 32;
  const auto h = los_realization(M, N, 0.3, 0.2, {0.2});
  const auto v = receive_beamformer(0.3, M);
  const auto gam = effective_scalar_channel(h, v, PhaseShiftVector::zeros(N, 2));
  EXPECT_NEAR(std::norm(gam[0]), 0.5 * 0.25 * M * N * N, 1e-9);
}

TEST(EffectiveChannel, OrthogonalCombinerKillsReflection) {
  // a_2(0) = [1, 1], so [1, -1]/sqrt2 is orthogonal
  const auto h = los_realization(2, 8, 0.0, 0.4, {0.1, -0.6});
  const ComplexVector v{{1.0 / std::sqrt(2.0), 0.0}, {-1.0 / std::sqrt(2.0), 0.0}};
  for (const Complex& g : effective_scalar_channel(h, v, PhaseShiftVector::zeros(8, 2))) {
    EXPECT_LT(std::abs(g), 1e-15);
  }
}

TEST(EffectiveChannel, SingleElementReduction) {
  SystemConfig c;
  c.M = 3;
  c.N = 1;
  c.K = 2;
  RngStream s(8, 0);
  const Geometry g = make_geometry(c, s);
  const ChannelRealization h = sample_channels(g, c, s);
  const auto v = receive_beamformer(-0.2, 3);
  const auto gam = effective_scalar_channel(h, v, PhaseShiftVector::zeros(1, 2));
  const auto a_r = array_response(3, h.phi_r, 0.5);
  for (std::size_t k = 0; k < 2; ++k) {
    const Complex expect = inner(v, h.h_direct[k]) + std::sqrt(h.rho_1) * inner(v, a_r) * h.h_reflect[k][0];
    EXPECT_NEAR(std::abs(gam[k] - expect), 0.0, 1e-15 * std::abs(expect) + 1e-25);
  }
}

TEST(EffectiveChannel, PhasesMultiplyElementwise) {
  // theta = pi on element 1 of a 2-element IRS flips that element's term
  const auto h = los_realization(1, 2, 0.0, 0.0, {0.0});
  const ComplexVector v{{1.0, 0.0}};
  const auto flat = effective_scalar_channel(h, v, PhaseShiftVector(2, {0, 0}));
  const auto flip = effective_scalar_channel(h, v, PhaseShiftVector(2, {0, 1}));
  EXPECT_NEAR(std::abs(flat[0]), 2.0 * std::sqrt(0.5 * 0.25), 1e-15);
  EXPECT_NEAR(std::abs(flip[0]), 0.0, 1e-15);
}

TEST(EffectiveChannel, RejectsBadDimensionsAndNorm) {
  const auto h = los_realization(2, 4, 0.0, 0.0, {0.0});
  const auto v = receive_beamformer(0.0, 2);
  EXPECT_THROW(effective_scalar_channel(h, receive_beamformer(0.0, 3), PhaseShiftVector::zeros(4, 2)),
               std::invalid_argument);
  EXPECT_THROW(effective_scalar_channel(h, v, PhaseShiftVector::zeros(5, 2)), std::invalid_argument);
  const ComplexVector unnormalized{{1.0, 0.0}, {1.0, 0.0}};
  EXPECT_THROW(effective_scalar_channel(h, unnormalized, PhaseShiftVector::zeros(4, 2)), std::invalid_argument);
}
