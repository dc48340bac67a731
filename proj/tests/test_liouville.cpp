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

#include "qjh/liouville.hpp"
#include "test_support.hpp"

namespace qjh {
namespace {

using testing::random_density;
using testing::random_hermitian;
using testing::random_matrix;

Matrix full_state(const Matrix& sys, int a, int b) {
  const Index d = sys.rows();
  BlockState s{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  s.block(a, b) = sys;
  return block_compose(s);
}

double rel(const Matrix& measured, const Matrix& reference) {
  return (measured - reference).norm() / reference.norm();
}

// Dropped first-order terms for one dt step.
double step_band(const ModelParams& p) {
  return 10.0 * (1.0 / (p.G() * p.dt) + p.gamma1 * p.dt + p.kappa * p.kappa * p.dt / p.G());
}

TEST(Generator, SuperoperatorMatchesDirectForm) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Index d = 2 + trial;
    LindbladModel m{Operator(random_hermitian(d, rng)), {}};
    m.lindblad_ops.emplace_back(random_matrix(d, d, rng));
    m.lindblad_ops.emplace_back(random_matrix(d, d, rng));
    const Matrix rho = random_density(d, rng);
    const Matrix direct = apply_generator(m, rho);
    const Matrix via = generator_superoperator(m).apply(rho);
    EXPECT_LT((direct - via).norm(), 1e-12 * std::max(1.0, direct.norm()));
  }
}

TEST(Generator, ComponentFormMatchesTotalModel) {
  std::mt19937_64 rng(2);
  for (int d : {2, 3, 4}) {
    const ModelParams p = testing::random_regime_params(rng, 4, d);
    const LindbladModel m = build_total_model(p);
    // Arbitrary operators, not only states: the identity is linear.
    const Matrix rho = random_matrix(2 * d, 2 * d, rng);
    const BlockState direct = block_decompose(apply_generator(m, rho));
    const BlockState comp = component_derivatives(p, block_decompose(rho));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double scale = std::max(1.0, direct.block(a, b).norm());
        EXPECT_LT((direct.block(a, b) - comp.block(a, b)).norm() / scale, 1e-12)
            << "d " << d << " block " << a << b;
      }
  }
}

TEST(Generator, DephasingLindbladExpansion) {
  // sqrt(g2) (1 (x) sz) as a Lindblad operator equals g2 (sz rho sz - rho).
  std::mt19937_64 rng(3);
  const double g2 = 437.0;
  const Matrix z = tensor(Matrix(Matrix::Identity(3, 3)), pauli_z());
  LindbladModel m{Operator::zero(6), {Operator(Matrix(std::sqrt(g2) * z))}};
  const Matrix rho = random_density(6, rng);
  const Matrix expect = g2 * (z * rho * z - rho);
  EXPECT_LT((apply_generator(m, rho) - expect).norm() / expect.norm(), 1e-12);
}

TEST(Propagator, TracePositivityHermiticity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = testing::random_regime_params(rng, 4, 2 + trial % 3);
    const LindbladModel m = build_total_model(p);
    const Matrix rho0 = random_density(m.dim(), rng);
    for (double t : {0.0, 0.01, 0.3, 5.0}) {
      const Matrix rho = build_propagator(m, t).apply(rho0);
      const DensityMatrix dm(rho);
      EXPECT_NEAR(std::abs(rho.trace() - Complex(1.0)), 0.0, 1e-10);
      EXPECT_TRUE(dm.is_hermitian(1e-10));
      EXPECT_GE(dm.min_eigenvalue(), -1e-8);
    }
  }
}

TEST(Propagator, ZeroTimeIsIdentityAndNegativeRejected) {
  const LindbladModel m = build_total_model(testing::regime_params());
  EXPECT_LT((build_propagator(m, 0.0).matrix() - Matrix::Identity(16, 16)).norm(), 1e-15);
  EXPECT_THROW(build_propagator(m, -1.0), PreconditionError);
}

TEST(Propagator, SemigroupProperty) {
  const LindbladModel m = build_total_model(testing::regime_params());
  const Superoperator a = build_propagator(m, 0.02) * build_propagator(m, 0.03);
  const Superoperator b = build_propagator(m, 0.05);
  EXPECT_LT((a.matrix() - b.matrix()).norm() / b.matrix().norm(), 1e-12);
}

TEST(Propagator, ModeCoherenceDecaysAtCombinedRate) {
  ModelParams p = testing::regime_params();
  p.kappa = 0.0;
  p.gamma2 = 3.0;
  const LindbladModel m = build_total_model(p);
  std::mt19937_64 rng(5);
  const Matrix sys = random_density(2, rng);
  for (double t : {0.1, 0.5, 2.0}) {
    const BlockState b = block_decompose(build_propagator(m, t).apply(full_state(sys, 0, 1)));
    EXPECT_LT(rel(b.b01, std::exp(-p.G() * t) * sys), 1e-10) << t;
  }
  // Pure dephasing part alone: exp(-2 gamma2 t) once gamma1 is negligible.
  p.gamma1 = 1e-9;
  const double t = 0.4;
  const BlockState b =
      block_decompose(build_propagator(build_total_model(p), t).apply(full_state(sys, 0, 1)));
  EXPECT_LT(rel(b.b01, std::exp(-2.0 * p.gamma2 * t) * sys), 1e-8);
}

TEST(Propagator, ModeAbsorptionAtGamma1) {
  ModelParams p = testing::regime_params();
  p.kappa = 0.0;
  const LindbladModel m = build_total_model(p);
  std::mt19937_64 rng(6);
  const Matrix sys = random_density(2, rng);
  const double t = 0.7;
  const BlockState b = block_decompose(build_propagator(m, t).apply(full_state(sys, 1, 1)));
  EXPECT_LT(rel(b.b11, std::exp(-p.gamma1 * t) * sys), 1e-10);
  EXPECT_LT(rel(b.b00, (1.0 - std::exp(-p.gamma1 * t)) * sys), 1e-10);
}

TEST(Propagator, ExcitationLeakSlowsWithGamma2) {
  // Survival of the excited atom falls off at 2 kappa^2 / G.
  double previous = 0.0;
  for (double g2 : {50.0, 200.0, 1000.0, 5000.0}) {
    ModelParams p = testing::regime_params();
    p.gamma2 = g2;
    const LindbladModel m = build_total_model(p);
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    const Matrix rho = build_propagator(m, 20.0).apply(full_state(excited, 0, 0));
    const double survival = trace_out_mode(rho)(1, 1).real();
    EXPECT_GT(survival, previous);
    previous = survival;
  }
}

TEST(StepOracle, UnexcitedModeWithinFirstOrderBand) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const ModelParams p = testing::random_regime_params(rng, 1, 2 + trial % 2);
    const Matrix rho00 = random_density(p.d_sys, rng);
    const BlockState exact = block_decompose(
        build_propagator(build_total_model(p), p.dt).apply(full_state(rho00, 0, 0)));
    const BlockState oracle = step_unexcited_oracle(p, rho00);
    const double band = step_band(p);
    EXPECT_LT(rel(exact.b00, oracle.b00), band);
    EXPECT_LT(rel(exact.b01, oracle.b01), band);
    EXPECT_LT(rel(exact.b10, oracle.b10), band);
    EXPECT_LT(rel(exact.b11, oracle.b11), band);
  }
}

TEST(StepOracle, ExcitedModeWithinFirstOrderBand) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 4; ++trial) {
    const ModelParams p = testing::random_regime_params(rng, 1, 2 + trial % 2);
    const Matrix rho11 = random_density(p.d_sys, rng);
    const BlockState exact = block_decompose(
        build_propagator(build_total_model(p), p.dt).apply(full_state(rho11, 1, 1)));
    const BlockState oracle = step_excited_oracle(p, rho11);
    const double band = step_band(p);
    EXPECT_LT(rel(exact.b00, oracle.b00), band);
    EXPECT_LT(rel(exact.b01, oracle.b01), band);
    EXPECT_LT(rel(exact.b11, oracle.b11), band);
  }
}

TEST(StepOracle, ReabsorptionTermIsSmall) {
  // The a^dag rho11 a contribution to rho00 is second order in kappa/G
  // relative to the absorbed part.
  const ModelParams p = testing::regime_params();
  Matrix rho11 = Matrix::Zero(2, 2);
  rho11(0, 0) = 1.0;
  const BlockState oracle = step_excited_oracle(p, rho11);
  const double reabsorbed = oracle.b00(1, 1).real();
  EXPECT_NEAR(reabsorbed, 2.0 * p.kappa * p.kappa / p.G() * p.dt, 1e-15);
  EXPECT_LT(reabsorbed / oracle.b00(0, 0).real(), 1e-5);
}

}  // namespace
}  // namespace qjh
