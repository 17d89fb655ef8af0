// Copyright 2026 The EdgeSpec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "edgespec/errors.hpp"
#include "edgespec/latency.hpp"
#include "edgespec/random.hpp"

namespace edgespec::latency {
namespace {

LatencyParams zero_params() {
  LatencyParams p;
  p.alpha_edge = p.beta = p.token_bits = p.header_bits = 0.0;
  p.t_prop = p.t_base = p.delta_cloud = p.t_down = 0.0;
  return p;
}

// Hand-worked reference profile.
LatencyParams worked_params() {
  LatencyParams p;
  p.alpha_edge = 0.001;
  p.beta = 0.002;
  p.token_bits = 16;
  p.header_bits = 320;
  p.t_prop = 0.02;
  p.t_base = 0.05;
  p.delta_cloud = 0.002;
  p.t_down = 0.01;
  return p;
}

TEST(Latency, UplinkWorkedExample) {
  LatencyParams p = zero_params();
  p.token_bits = 16;
  p.header_bits = 320;
  p.t_prop = 0.01;
  EXPECT_NEAR(uplink_time(5, 1e6, p), 0.0104, 1e-15);
  EXPECT_EQ(uplink_time(0, 1e6, zero_params()), 0.0);
}

TEST(Latency, UplinkPayloadScalesWithInverseRate) {
  const LatencyParams p = worked_params();
  const double a = uplink_time(7, 2e5, p) - p.t_prop;
  const double b = uplink_time(7, 4e5, p) - p.t_prop;
  EXPECT_NEAR(b, a / 2.0, 1e-15);
  EXPECT_THROW(uplink_time(1, 0.0, p), DomainError);
  EXPECT_THROW(uplink_time(1, -1.0, p), DomainError);
}

TEST(Latency, CloudTimeIsAffine) {
  LatencyParams p = zero_params();
  p.t_base = 0.05;
  p.delta_cloud = 0.002;
  EXPECT_EQ(cloud_time(0, p), 0.05);
  EXPECT_NEAR(cloud_time(5, p), 0.06, 1e-15);
  for (int k = 0; k < 20; ++k) EXPECT_NEAR(cloud_time(k + 1, p) - cloud_time(k, p), 0.002, 1e-15);
}

TEST(Latency, EdgeTimeIsAffine) {
  LatencyParams p = zero_params();
  p.beta = 0.003;
  EXPECT_EQ(edge_time(0, p), 0.003);
  p.beta = 0.0;
  p.alpha_edge = 0.0085;
  EXPECT_NEAR(edge_time(4, p), 0.034, 1e-15);
}

TEST(Latency, FixedAndMarginalSingleTerm) {
  LatencyParams p = zero_params();
  p.t_base = 0.1;
  const FixedMarginal fm = fixed_and_marginal(1e6, p);
  EXPECT_EQ(fm.t_fixed, 0.1);
  EXPECT_EQ(fm.t_marginal, 0.0);
}

TEST(Latency, FixedAndMarginalWorkedExample) {
  const FixedMarginal fm = fixed_and_marginal(1e5, worked_params());
  EXPECT_NEAR(fm.t_fixed, 0.0852, 1e-15);
  EXPECT_NEAR(fm.t_marginal, 0.00316, 1e-15);
  EXPECT_THROW(fixed_and_marginal(0.0, worked_params()), DomainError);
}

TEST(Latency, StepTimeRegroupsIntoFixedPlusMarginal) {
  Rng rng(11);
  for (int draw = 0; draw < 100; ++draw) {
    LatencyParams p;
    p.alpha_edge = rng.uniform() * 0.01;
    p.beta = rng.uniform() * 0.01;
    p.token_bits = 1.0 + rng.below(32);
    p.header_bits = rng.below(512);
    p.t_prop = rng.uniform() * 0.1;
    p.t_base = rng.uniform() * 0.2;
    p.delta_cloud = rng.uniform() * 0.005;
    p.t_down = rng.uniform() * 0.05;
    const double rate = std::pow(10.0, 2.0 + 6.0 * rng.uniform());
    const FixedMarginal fm = fixed_and_marginal(rate, p);
    for (int k = 1; k <= 64; ++k) {
      const StepBreakdown b = step_time(k, rate, p);
      const double regrouped = fm.t_fixed + k * fm.t_marginal;
      EXPECT_LE(std::abs(b.t_total - regrouped), 1e-12 * regrouped);
      EXPECT_EQ(b.t_total, ((b.t_edge + b.t_up) + b.t_cloud) + b.t_down);
      EXPECT_EQ(b.t_edge, edge_time(k, p));
      EXPECT_EQ(b.t_up, uplink_time(k, rate, p));
      EXPECT_EQ(b.t_cloud, cloud_time(k, p));
    }
  }
}

TEST(Latency, StepTimeMonotoneInStrideAndRate) {
  const LatencyParams p = worked_params();
  for (double rate : {1e3, 1e4, 1e5, 1e6}) {
    for (int k = 1; k < 40; ++k) {
      EXPECT_LT(step_time(k, rate, p).t_total, step_time(k + 1, rate, p).t_total);
      EXPECT_GT(step_time(k, rate, p).t_total, step_time(k, rate * 1.5, p).t_total);
    }
  }
}

TEST(SyncTime, MatchesModelShippingRows) {
  EXPECT_NEAR(sync_time(3.2e9, 1e7, 0.89), 2876.404, 1e-3);
  EXPECT_NEAR(sync_time(3.2e9, 1e7, 0.89) / 60.0, 48.0, 0.2);
  EXPECT_NEAR(sync_time(3.2e9, 5e7, 0.89), 575.28, 1e-2);
  EXPECT_NEAR(sync_time(3.2e9, 5e7, 0.89) / 60.0, 9.5, 0.2);
  EXPECT_NEAR(sync_time(3.2e9, 3e8, 0.89) / 60.0, 1.6, 0.05);
  EXPECT_DOUBLE_EQ(sync_time(3.2e9, 1e7, 1.0), 2560.0);
  EXPECT_DOUBLE_EQ(sync_time(3.2e9, 1e7), sync_time(3.2e9, 1e7, kDefaultSyncEfficiency));
}

TEST(SyncTime, LinearInBytesInverseInRate) {
  EXPECT_DOUBLE_EQ(sync_time(2e9, 1e7, 0.5), 2.0 * sync_time(1e9, 1e7, 0.5));
  EXPECT_DOUBLE_EQ(sync_time(1e9, 2e7, 0.5), 0.5 * sync_time(1e9, 1e7, 0.5));
  EXPECT_THROW(sync_time(1e9, 1e7, 0.0), DomainError);
  EXPECT_THROW(sync_time(1e9, 1e7, 1.2), DomainError);
  EXPECT_THROW(sync_time(0.0, 1e7, 0.9), DomainError);
}

TEST(Energy, ZeroPowerIsZeroEnergy) {
  const PowerParams pw{0.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(energy_step(step_time(3, 1e5, worked_params()), pw).total, 0.0);
}

TEST(Energy, UnitPowersGiveTotalTime) {
  const PowerParams pw{1.0, 1.0, 1.0, 1.0};
  const StepBreakdown b = step_time(3, 1e5, worked_params());
  EXPECT_NEAR(energy_step(b, pw).total, b.t_total, 1e-15);
}

TEST(Energy, WeightedWorkedExample) {
  // k = 4 at 1e5 bit/s: t_edge 0.006, t_up 0.02384, t_cloud 0.058, t_down 0.01.
  const PowerParams pw{2.0, 3.0, 1.0, 0.5};
  const EnergyBreakdown e = energy_step(step_time(4, 1e5, worked_params()), pw);
  EXPECT_NEAR(e.edge, 0.012, 1e-15);
  EXPECT_NEAR(e.up, 0.07152, 1e-15);
  EXPECT_NEAR(e.cloud, 0.029, 1e-15);
  EXPECT_NEAR(e.down, 0.01, 1e-15);
  EXPECT_NEAR(e.total, 0.12252, 1e-14);
}

TEST(Latency, ParamsAreValidated) {
  LatencyParams p;
  p.beta = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = LatencyParams{};
  p.t_prop = std::nan("");
  EXPECT_THROW(p.validate(), ConfigError);
  PowerParams pw;
  pw.p_idle = -0.1;
  EXPECT_THROW(pw.validate(), ConfigError);
}

}  // namespace
}  // namespace edgespec::latency
