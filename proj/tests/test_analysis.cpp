// Copyright 2026 The qjh Authors
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

#include "qjh/analysis.hpp"
#include "test_support.hpp"

namespace qjh {
namespace {

const ComparisonEntry& entry(const ComparisonReport& r, const std::string& label) {
  for (const auto& e : r.entries)
    if (e.label == label) return e;
  throw std::runtime_error("missing entry " + label);
}

TEST(RelativeError, Basics) {
  EXPECT_NEAR(relative_error(1.1, 1.0), 0.1, 1e-15);
  EXPECT_NEAR(relative_error(0.9, 1.0), 0.1, 1e-15);
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_GT(relative_error(1e-40, 0.0), 0.0);
}

TEST(EvenCheckpoints, SpacingAndDeduplication) {
  EXPECT_EQ(even_checkpoints(100, 5), (std::vector<int>{20, 40, 60, 80, 100}));
  EXPECT_EQ(even_checkpoints(2, 5), (std::vector<int>{1, 2}));
  EXPECT_THROW(even_checkpoints(10, 0), PreconditionError);
}

TEST(CompareNoJump, WithinBandInRegime) {
  const ModelParams p = testing::regime_params(200);
  const ComparisonReport r = compare_no_jump(p);
  ASSERT_EQ(r.entries.size(), 1u);
  const ComparisonEntry& e = r.entries[0];
  EXPECT_NEAR(e.reference, std::exp(-2.0 * p.kappa * p.kappa * 200 * p.dt / p.G()), 1e-14);
  EXPECT_TRUE(e.pass);
  EXPECT_LT(e.relative_error, e.band);
  EXPECT_NEAR(e.band, 10.0 * (1.0 / (p.G() * p.dt) + p.gamma1 * p.dt + p.kappa * p.kappa * 10.0 / p.G()),
              1e-15);
}

TEST(CompareNoJump, HeadroomIsConfiguration) {
  const ModelParams p = testing::regime_params(20);
  const ComparisonReport wide = compare_no_jump(p, BandConfig{10.0});
  const ComparisonReport narrow = compare_no_jump(p, BandConfig{1e-12});
  EXPECT_NEAR(narrow.entries[0].band * 1e13, wide.entries[0].band, 1e-12);
  EXPECT_FALSE(narrow.all_pass());
}

TEST(CompareOneJump, ClassProbabilityWithinBand) {
  const ModelParams p = testing::regime_params(8);
  const int window = 100;  // 5 / (gamma1 dt)
  const ComparisonReport r = compare_one_jump(p, 4, window);
  const ComparisonEntry& cls = entry(r, "one_jump_class");
  EXPECT_TRUE(cls.asserted);
  EXPECT_TRUE(cls.pass) << cls.relative_error << " vs " << cls.band;
  EXPECT_NEAR(cls.reference, 2.0 * p.dt * p.kappa * p.kappa / p.G() *
                                 std::exp(-2.0 * p.kappa * p.kappa * 4 * p.dt / p.G()),
              1e-18);
  EXPECT_NEAR(cls.band - entry(r, "window_leakage").reference,
              10.0 * (1.0 / (p.G() * p.dt) + p.gamma1 * p.dt + p.kappa * p.kappa * 4 * p.dt / p.G()),
              1e-14);
  const ComparisonEntry& leak = entry(r, "window_leakage");
  EXPECT_FALSE(leak.asserted);
  EXPECT_LT(leak.measured, leak.band);
  EXPECT_THROW(compare_one_jump(p, 0, window), PreconditionError);
  EXPECT_THROW(compare_one_jump(p, 4, 0), PreconditionError);
}

TEST(CompareOneJump, UncoupledHasZeroError) {
  ModelParams p = testing::regime_params(8);
  p.kappa = 0.0;
  const ComparisonReport r = compare_one_jump(p, 4, 100);
  EXPECT_EQ(entry(r, "one_jump_class").relative_error, 0.0);
  EXPECT_EQ(compare_no_jump(p).entries[0].relative_error, 0.0);
}

TEST(Persistence, FollowsAbsorptionLaw) {
  const ModelParams p = testing::regime_params(8);
  const ComparisonReport r = compare_post_jump_persistence(p, 4, 100);
  ASSERT_EQ(r.entries.size(), 100u);
  for (const auto& e : r.entries) {
    EXPECT_NEAR(e.reference, std::pow(1.0 - p.gamma1 * p.dt, e.parameter), 1e-14);
    EXPECT_TRUE(e.pass) << "k " << e.parameter;
  }
  // Persistence decreases monotonically.
  for (std::size_t k = 1; k < r.entries.size(); ++k) {
    EXPECT_LT(r.entries[k].measured, r.entries[k - 1].measured);
  }
}

TEST(Persistence, RequiresARegisteredPhoton) {
  ModelParams p = testing::regime_params(8);
  p.kappa = 0.0;
  EXPECT_THROW(compare_post_jump_persistence(p, 4, 10), PreconditionError);
}

TEST(Scaling, LeadingEdgePairFollowsInverseSquare) {
  const ModelParams p = testing::regime_params(8);
  const ScalingFit fit =
      decoherence_scaling(p, SweepParameter::Gamma2, {50, 100, 200, 500, 1000, 2000});
  EXPECT_NEAR(fit.slope, -2.0, 0.3);
  EXPECT_LT(fit.rms_residual, 0.1);
  ASSERT_EQ(fit.points.size(), 6u);
  for (const auto& pt : fit.points) {
    EXPECT_NEAR(pt.log_ratio, std::log(pt.ratio), 1e-15);
    // ratio ~ 1/(2 G dt)^2 at large G dt
    EXPECT_LT(pt.ratio * std::pow(2.0 * pt.g_dt, 2.0), 2.5);
    EXPECT_GT(pt.ratio * std::pow(2.0 * pt.g_dt, 2.0), 0.4);
  }
}

TEST(Scaling, DtSweepAgrees) {
  const ModelParams p = testing::regime_params(8);
  const ScalingFit fit =
      decoherence_scaling(p, SweepParameter::Dt, {0.01, 0.02, 0.05, 0.1, 0.2, 0.5});
  EXPECT_NEAR(fit.slope, -2.0, 0.3);
}

TEST(Scaling, NoPhotonMidpointPairFallsFaster) {
  // This pair's off-diagonal term carries an extra factor 1/(G dt).
  const ModelParams p = testing::regime_params(8);
  const ScalingFit fit = decoherence_scaling(p, SweepParameter::Gamma2, {50, 100, 200, 500, 1000, 2000},
                                             ScalingPair::NoPhotonMidpoint);
  EXPECT_NEAR(fit.slope, -3.0, 0.3);
}

TEST(Scaling, DegenerateInputs) {
  ModelParams p = testing::regime_params(8);
  EXPECT_THROW(decoherence_scaling(p, SweepParameter::Gamma2, {100, 200, 300}), DegenerateInputError);
  EXPECT_THROW(decoherence_scaling(p, SweepParameter::Gamma2, {100, 200, 500, 1000}),
               DegenerateInputError);
  p.kappa = 0.0;
  EXPECT_THROW(decoherence_scaling(p, SweepParameter::Gamma2, {50, 100, 500, 2000}),
               DegenerateInputError);
  p = testing::regime_params(3);
  EXPECT_THROW(decoherence_scaling(p, SweepParameter::Gamma2, {50, 100, 500, 2000}),
               PreconditionError);
}

TEST(Adiabatic, ReducedModelTracksSystemMarginal) {
  ModelParams p = testing::regime_params();
  p.h0 = SystemHamiltonian::diagonal({0.0, 0.2});
  p.initial_state = Vector::Ones(2);
  const SeriesReport r = adiabatic_validity(p, 1000.0);
  ASSERT_EQ(r.rows.size(), 9u);
  for (const auto& row : r.rows) EXPECT_TRUE(!row.asserted || row.pass) << row.parameter;
  EXPECT_FALSE(r.rows.front().asserted);  // t = 1/gamma1 is before the validity window
  EXPECT_TRUE(r.rows[7].asserted);
  EXPECT_NEAR(r.rows[7].band, 10.0 * p.kappa / p.gamma1, 1e-15);
  // Last row: error with gamma2 x 10 is below the base worst case.
  EXPECT_LT(r.rows.back().measured, r.rows.back().band);
  EXPECT_TRUE(r.all_pass());
}

TEST(Adiabatic, ShortHorizonRejected) {
  EXPECT_THROW(adiabatic_validity(testing::regime_params(), 5.0), PreconditionError);
}

}  // namespace
}  // namespace qjh
