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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qjh/analysis.hpp"
#include "qjh/histories.hpp"
#include "qjh/liouville.hpp"
#include "qjh/trajectories.hpp"
#include "test_support.hpp"

namespace {

using namespace qjh;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ModelParams detector_qubit() {
  ModelParams p = qjh::testing::regime_params();
  p.h0 = SystemHamiltonian::zero();
  return p;
}

// Qubit with a level splitting and a superposition start, so
// coherences matter in the system marginal.
ModelParams split_qubit() {
  ModelParams p = qjh::testing::regime_params();
  p.h0 = SystemHamiltonian::diagonal({0.0, 0.2});
  p.initial_state = Vector::Ones(2);
  return p;
}

Outcome sum_rules() {
  std::mt19937_64 rng(20260101);
  Outcome o;
  double worst_diag = 0.0, worst_grand = 0.0, worst_herm = 0.0, min_p = 1.0;
  int configs = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 2; ++rep) {
      const ModelParams p = qjh::testing::random_regime_params(rng, n, 2 + rep);
      for (auto conv : {ProjectionConvention::Literal, ProjectionConvention::ProjectAfterStep}) {
        const InvariantSummary inv = full_decoherence_matrix(p, {10, conv}).invariants();
        worst_diag = std::max(worst_diag, std::abs(inv.diagonal_sum - 1.0));
        worst_grand = std::max(worst_grand, std::abs(inv.grand_sum - Complex(1.0)));
        worst_herm = std::max(worst_herm, inv.hermiticity_error);
        min_p = std::min(min_p, inv.min_diagonal);
        ++configs;
      }
    }
  }
  o.pass = worst_diag <= 1e-10 && worst_grand <= 1e-10 && worst_herm <= 1e-10 && min_p >= -1e-10;
  o.detail = std::to_string(configs) + " configs, |sum p - 1| " + fmt("%.3g", worst_diag) +
             ", |sum D - 1| " + fmt("%.3g", worst_grand) + ", hermiticity " + fmt("%.3g", worst_herm) +
             ", min p " + fmt("%.3g", min_p);
  return o;
}

Outcome no_jump() {
  Outcome o;
  for (int n : {2000, 20000}) {
    ModelParams p = detector_qubit();
    p.n_steps = n;
    const ComparisonReport r = compare_no_jump(p);
    const ComparisonEntry& e = r.entries.front();
    const double closed = std::exp(-2.0 * p.kappa * p.kappa * n * p.dt / p.G());
    const bool ok = r.all_pass() && std::abs(e.reference - closed) <= 1e-12;
    o.pass = o.pass && ok;
    o.detail += "N=" + std::to_string(n) + ": p " + fmt("%.9f", e.measured) + " vs " +
                fmt("%.9f", closed) + " rel " + fmt("%.3g", e.relative_error) + " band " +
                fmt("%.3g", e.band) + "; ";
  }
  return o;
}

Outcome one_jump() {
  Outcome o;
  ModelParams p = detector_qubit();
  p.n_steps = 2000;
  const int window = static_cast<int>(std::lround(5.0 / (p.gamma1 * p.dt)));
  double worst = 0.0, band = 0.0;
  for (int j : {1, 4, 40, 400, 2000}) {
    const ComparisonReport r = compare_one_jump(p, j, window);
    for (const auto& e : r.entries) {
      if (!e.asserted) continue;
      o.pass = o.pass && e.pass;
      worst = std::max(worst, e.relative_error);
      band = e.band;
    }
  }
  o.detail = "window " + std::to_string(window) + " steps, worst rel " + fmt("%.3g", worst) +
             " band " + fmt("%.3g", band);
  return o;
}

Outcome persistence() {
  Outcome o;
  const ModelParams p = detector_qubit();
  const int k_max = static_cast<int>(std::lround(5.0 / (p.gamma1 * p.dt)));
  const ComparisonReport r = compare_post_jump_persistence(p, 4, k_max);
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, e.relative_error);
  o.pass = r.all_pass() && static_cast<int>(r.entries.size()) == k_max;
  o.detail = "k <= " + std::to_string(k_max) + ", worst rel " + fmt("%.3g", worst) + " band " +
             fmt("%.3g", r.entries.front().band);
  return o;
}

Outcome scaling() {
  Outcome o;
  const ModelParams p = detector_qubit();
  const std::vector<double> sweep = {50, 100, 200, 500, 1000, 2000};
  const ScalingFit fit = decoherence_scaling(p, SweepParameter::Gamma2, sweep, ScalingPair::LeadingEdge);
  const double span = fit.points.back().g_dt / fit.points.front().g_dt;
  o.pass = std::abs(fit.slope + 2.0) <= 0.3 && span >= 30.0;
  const ScalingFit other =
      decoherence_scaling(p, SweepParameter::Gamma2, sweep, ScalingPair::NoPhotonMidpoint);
  o.detail = "leading-edge pair slope " + fmt("%.4f", fit.slope) + " over x" + fmt("%.1f", span) +
             " in G dt (all-zeros vs midpoint photon: " + fmt("%.4f", other.slope) + ", not asserted)";
  return o;
}

Outcome unraveling() {
  Outcome o;
  const SeriesReport r = unraveling_consistency(split_qubit(), 10000, 1000.0, 20260101, 5);
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, row.measured);
  o.pass = r.all_pass() && r.rows.size() == 5;
  o.detail = "M=10000, T=1000, worst trace distance " + fmt("%.3g", worst) + " band " +
             fmt("%.3g", r.rows.front().band);
  return o;
}

Outcome adiabatic() {
  Outcome o;
  const SeriesReport r = adiabatic_validity(split_qubit(), 1000.0);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i)
    if (r.rows[i].asserted) worst = std::max(worst, r.rows[i].measured);
  o.pass = r.all_pass();
  o.detail = "worst trace distance " + fmt("%.3g", worst) + " band " + fmt("%.3g", r.rows[r.rows.size() - 2].band) +
             ", with gamma2 x10: " + fmt("%.3g", r.rows.back().measured);
  return o;
}

Outcome generator_equivalences() {
  Outcome o;
  std::mt19937_64 rng(8);
  double comp = 0.0, deph = 0.0, tree = 0.0;
  for (int d : {2, 3, 4}) {
    const ModelParams p = qjh::testing::random_regime_params(rng, 4, d);
    const Matrix rho = qjh::testing::random_matrix(2 * d, 2 * d, rng);
    const BlockState a = block_decompose(apply_generator(build_total_model(p), rho));
    const BlockState b = component_derivatives(p, block_decompose(rho));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comp = std::max(comp, (a.block(i, j) - b.block(i, j)).norm());

    const Matrix z = tensor(Matrix(Matrix::Identity(d, d)), pauli_z());
    const LindbladModel sz{Operator::zero(2 * d), {Operator(Matrix(std::sqrt(p.gamma2) * z))}};
    const Matrix expect = p.gamma2 * (z * rho * z - rho);
    deph = std::max(deph, (apply_generator(sz, rho) - expect).norm() / expect.norm());
  }
  for (int n = 1; n <= 4; ++n) {
    const ModelParams p = qjh::testing::random_regime_params(rng, n, 2);
    const DecoherenceMatrix dm = full_decoherence_matrix(p);
    const HistoryEvaluator naive(p);
    const std::uint64_t size = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < size; ++i)
      for (std::uint64_t j = 0; j < size; ++j) {
        const Complex ref = naive.functional(history_from_index(i, n), history_from_index(j, n));
        tree = std::max(tree, std::abs(dm.entries(i, j) - ref));
      }
  }
  o.pass = comp <= 1e-12 && deph <= 1e-12 && tree <= 1e-12;
  o.detail = "component " + fmt("%.3g", comp) + ", sigma_z dephasing " + fmt("%.3g", deph) +
             ", pair-tree vs naive " + fmt("%.3g", tree);
  return o;
}

Outcome trivial_limits() {
  Outcome o;
  ModelParams p = detector_qubit();
  p.kappa = 0.0;
  const DecoherenceMatrix d = full_decoherence_matrix(p);
  const double p0 = d.entries(0, 0).real();
  const double eps = decoherence_report(d, 0.1).attained_epsilon;
  ModelParams long_run = p;
  long_run.n_steps = 2000;
  const double p0_path = HistoryEvaluator(long_run).prefix_probabilities(History(2000, 0)).back();
  const TrajectorySampler sampler(p, 1000.0);
  std::size_t jumps = 0;
  for (const auto& r : sample_ensemble(sampler, 20260101, 1000)) jumps += r.jump_steps.size();
  o.pass = p0 == 1.0 && p0_path == 1.0 && eps == 0.0 && jumps == 0;
  o.detail = "p(0^8) - 1 = " + fmt("%.3g", p0 - 1.0) + ", p(0^2000) - 1 = " + fmt("%.3g", p0_path - 1.0) +
             ", jumps in 1000 trajectories " + std::to_string(jumps) + ", attained eps " + fmt("%.3g", eps);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact sum rules", sum_rules},
      {"no-jump correspondence", no_jump},
      {"one-jump correspondence", one_jump},
      {"post-jump absorption law", persistence},
      {"decoherence scaling", scaling},
      {"unraveling consistency", unraveling},
      {"adiabatic elimination validity", adiabatic},
      {"generator equivalences", generator_equivalences},
      {"trivial limits", trivial_limits},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
