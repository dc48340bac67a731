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

#include "qjh/histories.hpp"
#include "test_support.hpp"

namespace qjh {
namespace {

constexpr ProjectionConvention kConventions[] = {ProjectionConvention::Literal,
                                                 ProjectionConvention::ProjectAfterStep};

TEST(HistoryIndex, FirstOutcomeIsMostSignificant) {
  EXPECT_EQ(history_index({1, 0, 0}), 4u);
  EXPECT_EQ(history_index({0, 0, 1}), 1u);
  for (std::uint64_t i = 0; i < 64; ++i) EXPECT_EQ(history_index(history_from_index(i, 6)), i);
  const History h = history_from_index(5, 4);
  EXPECT_EQ(h, (History{0, 1, 0, 1}));
}

TEST(Projector, ActsOnModeOnly) {
  const Operator p1 = projector(1, 3);
  EXPECT_EQ(p1.dim(), 6);
  EXPECT_EQ(p1(3, 3), Complex(1.0));
  EXPECT_EQ(p1(2, 2), Complex(0.0));
  EXPECT_EQ((projector(0, 3) + p1).matrix(), Matrix::Identity(6, 6));
}

TEST(DecoherenceMatrix, SumRulesOnRandomRegimeConfigs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial;
    const ModelParams p = testing::random_regime_params(rng, n, 2 + trial % 2);
    for (auto conv : kConventions) {
      const DecoherenceMatrix d = full_decoherence_matrix(p, {10, conv});
      const InvariantSummary inv = d.invariants();
      EXPECT_NEAR(inv.diagonal_sum, 1.0, 1e-10) << "N " << n;
      EXPECT_NEAR(std::abs(inv.grand_sum - Complex(1.0)), 0.0, 1e-10) << "N " << n;
      EXPECT_LT(inv.hermiticity_error, 1e-10);
      EXPECT_GE(inv.min_diagonal, -1e-10);
      EXPECT_LT(inv.max_diagonal_imag, 1e-10);
      EXPECT_TRUE(inv.ok());
    }
  }
}

TEST(DecoherenceMatrix, RecursionMatchesNaiveEvaluation) {
  std::mt19937_64 rng(22);
  for (int n = 1; n <= 4; ++n) {
    for (int d_sys : {2, 3}) {
      const ModelParams p = testing::random_regime_params(rng, n, d_sys);
      for (auto conv : kConventions) {
        const DecoherenceMatrix d = full_decoherence_matrix(p, {10, conv});
        const HistoryEvaluator naive(p, conv);
        const std::uint64_t size = std::uint64_t{1} << n;
        double worst = 0.0;
        for (std::uint64_t i = 0; i < size; ++i)
          for (std::uint64_t j = 0; j < size; ++j) {
            const Complex ref = naive.functional(history_from_index(i, n), history_from_index(j, n));
            worst = std::max(worst, std::abs(d.entries(i, j) - ref));
          }
        EXPECT_LT(worst, 1e-12) << "N " << n << " d " << d_sys;
      }
    }
  }
}

TEST(DecoherenceMatrix, ParallelMatchesSerial) {
  std::mt19937_64 rng(23);
  const ModelParams p = testing::random_regime_params(rng, 7);
  const DecoherenceMatrix a = full_decoherence_matrix(p);
  const DecoherenceMatrix b = full_decoherence_matrix_serial(p);
  EXPECT_EQ(a.entries, b.entries);
}

TEST(DecoherenceMatrix, PrefixMarginalsFollowFromCompleteness) {
  const ModelParams p = testing::regime_params(5);
  const DecoherenceMatrix d = full_decoherence_matrix(p);
  const HistoryEvaluator eval(p);
  const History h = {0, 1, 1, 0, 1};
  const std::vector<double> prefix = eval.prefix_probabilities(h);
  ASSERT_EQ(prefix.size(), 5u);
  const std::vector<double> probs = d.probabilities();
  for (int k = 1; k <= 5; ++k) {
    double marginal = 0.0;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
      const History g = history_from_index(i, 5);
      if (std::equal(g.begin(), g.begin() + k, h.begin())) marginal += probs[i];
    }
    EXPECT_NEAR(prefix[k - 1], marginal, 1e-13) << k;
  }
  EXPECT_NEAR(prefix.back(), eval.probability(h), 1e-15);
}

TEST(DecoherenceMatrix, UncoupledLimit) {
  ModelParams p = testing::regime_params(6);
  p.kappa = 0.0;
  const DecoherenceMatrix d = full_decoherence_matrix(p);
  EXPECT_EQ(d.entries(0, 0), Complex(1.0));
  const DecoherenceReport rep = decoherence_report(d, 0.1);
  EXPECT_EQ(rep.attained_epsilon, 0.0);
  EXPECT_EQ(rep.violating_count, 0u);

  p.n_steps = 1;
  const DecoherenceMatrix one = full_decoherence_matrix(p);
  const std::vector<double> probs = one.probabilities();
  EXPECT_EQ(probs[0], 1.0);
  EXPECT_EQ(probs[1], 0.0);
}

TEST(DecoherenceMatrix, CapIsEnforced) {
  const ModelParams p = testing::regime_params(9);
  EXPECT_THROW(full_decoherence_matrix(p, {8, ProjectionConvention::Literal}), PreconditionError);
  EXPECT_THROW(full_decoherence_matrix(p, {13, ProjectionConvention::Literal}), PreconditionError);
}

TEST(DecoherenceReport, EpsilonTracksInverseGdt) {
  double previous = 1.0;
  for (double g2 : {100.0, 300.0, 1000.0, 3000.0}) {
    ModelParams p = testing::regime_params(8);
    p.gamma2 = g2;
    const DecoherenceReport rep = decoherence_report(full_decoherence_matrix(p), 0.1);
    EXPECT_LT(rep.attained_epsilon, previous) << g2;
    EXPECT_LT(rep.attained_epsilon, 10.0 / (p.G() * p.dt)) << g2;
    EXPECT_GT(rep.attained_epsilon, 0.01 / (p.G() * p.dt)) << g2;
    EXPECT_NEAR(rep.max_ratio, rep.attained_epsilon * rep.attained_epsilon, 1e-15);
    previous = rep.attained_epsilon;
  }
}

TEST(DecoherenceReport, FloorAndViolators) {
  const ModelParams p = testing::regime_params(6);
  const DecoherenceMatrix d = full_decoherence_matrix(p);
  const DecoherenceReport strict = decoherence_report(d, 1e-6, 1e-20, 4);
  EXPECT_GT(strict.violating_count, 0u);
  EXPECT_LE(strict.violating.size(), 4u);
  for (const auto& v : strict.violating) {
    EXPECT_NE(v.h, v.hp);
    EXPECT_GE(v.ratio, 1e-12);
  }
  const DecoherenceReport loose = decoherence_report(d, 0.5);
  EXPECT_EQ(loose.violating_count, 0u);
  const DecoherenceReport floored = decoherence_report(d, 0.5, 1.0);
  EXPECT_EQ(floored.evaluated_pairs, 0u);
  EXPECT_GT(floored.trivially_decoherent, 0u);
}

TEST(CoarseGrain, ClassKeysFromRunStarts) {
  std::vector<double> probs(16, 0.0);
  probs[history_index({0, 0, 0, 0})] = 0.5;
  probs[history_index({0, 1, 1, 0})] = 0.2;
  probs[history_index({0, 1, 1, 1})] = 0.1;
  probs[history_index({1, 0, 0, 1})] = 0.15;
  probs[history_index({0, 0, 1, 1})] = 0.05;
  const CoarseGrainResult c = coarse_grain_absorption(probs, 4, 2);
  EXPECT_DOUBLE_EQ(c.no_photon(), 0.5);
  EXPECT_DOUBLE_EQ(c.leakage, 0.1);
  EXPECT_DOUBLE_EQ(c.classes.at({0}), 0.2);
  EXPECT_DOUBLE_EQ(c.classes.at({1}), 0.05);
  EXPECT_DOUBLE_EQ(c.classes.at({0, 1}), 0.15);
  EXPECT_DOUBLE_EQ(c.total(), 1.0);
  EXPECT_THROW(coarse_grain_absorption(probs, 4, 0), PreconditionError);
  EXPECT_THROW(coarse_grain_absorption(probs, 3, 2), DimensionError);
}

TEST(CoarseGrain, ConservesProbability) {
  const DecoherenceMatrix d = full_decoherence_matrix(testing::regime_params(8));
  for (int w : {1, 2, 3, 100}) {
    const CoarseGrainResult c = coarse_grain_absorption(d, w);
    EXPECT_NEAR(c.total(), 1.0, 1e-10) << w;
  }
  EXPECT_EQ(coarse_grain_absorption(d, 100).leakage, 0.0);
}

TEST(DecoherenceFunctional, FreeFunctionMatchesEvaluator) {
  const ModelParams p = testing::regime_params(3);
  const History h = {0, 1, 1}, hp = {0, 0, 1};
  EXPECT_EQ(decoherence_functional(p, h, hp), HistoryEvaluator(p).functional(h, hp));
  EXPECT_THROW(HistoryEvaluator(p).functional({0, 1}, hp), DimensionError);
}

}  // namespace
}  // namespace qjh
