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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qjh/hilbert.hpp"
#include "qjh/liouville.hpp"
#include "qjh/model.hpp"

namespace qjh {

/// Output-mode projection outcomes alpha_1..alpha_N (0 = no photon).
using History = std::vector<std::uint8_t>;

/// Row/column index of a history in a decoherence matrix; alpha_1 is the
/// most significant bit, so indices follow lexicographic order.
std::uint64_t history_index(const History& h);
History history_from_index(std::uint64_t index, int n_steps);

/// Placement of projections relative to the dt propagation intervals.
enum class ProjectionConvention {
  /// P_{alpha_1} acts on the initial state; N-1 intervals between N projections.
  Literal,
  /// Every projection follows one dt interval; total time N dt.
  ProjectAfterStep,
};

/// 1 (x) |alpha><alpha| on system (x) output mode.
Operator projector(int alpha, Index d_sys);

/// Evaluates decoherence-functional entries one history pair at a time with
/// the dense one-step propagator of the total model and explicit projector
/// products. Initial state |psi0> (x) |0>.
class HistoryEvaluator {
 public:
  explicit HistoryEvaluator(const ModelParams& p,
                            ProjectionConvention convention = ProjectionConvention::Literal);

  Complex functional(const History& h, const History& hp) const;
  double probability(const History& h) const { return functional(h, h).real(); }
  /// p(alpha_1..alpha_k) for k = 1..N along one diagonal path.
  std::vector<double> prefix_probabilities(const History& h) const;

  const Superoperator& step() const { return step_; }
  ProjectionConvention convention() const { return convention_; }

 private:
  ProjectionConvention convention_;
  Superoperator step_;
  Matrix initial_;
  Operator proj_[2];
};

Complex decoherence_functional(const ModelParams& p, const History& h, const History& hp,
                               ProjectionConvention convention = ProjectionConvention::Literal);

struct InvariantSummary {
  double hermiticity_error = 0.0;  // max |D[h,h'] - conj(D[h',h])|
  double min_diagonal = 0.0;
  double max_diagonal_imag = 0.0;
  double diagonal_sum = 0.0;
  Complex grand_sum{0.0, 0.0};

  bool ok(double tol = kStructuralTol) const;
};

struct DecoherenceMatrix {
  int n_steps = 0;
  ProjectionConvention convention = ProjectionConvention::Literal;
  ModelParams params;
  Matrix entries;  // 2^N x 2^N, rows/cols ordered by history_index

  std::vector<double> probabilities() const;
  InvariantSummary invariants() const;
};

struct DecoherenceOptions {
  int n_cap = 10;
  ProjectionConvention convention = ProjectionConvention::Literal;
};

/// All 4^N entries by depth-first recursion over the history-pair tree,
/// sharing every propagated prefix. OpenMP-parallel over subtrees.
/// Throws PreconditionError when n_steps exceeds the cap.
DecoherenceMatrix full_decoherence_matrix(const ModelParams& p, const DecoherenceOptions& opts = {});
/// Single-threaded reference for full_decoherence_matrix.
DecoherenceMatrix full_decoherence_matrix_serial(const ModelParams& p,
                                                 const DecoherenceOptions& opts = {});

struct PairRatio {
  std::uint64_t h = 0;
  std::uint64_t hp = 0;
  double ratio = 0.0;  // |D|^2 / (p p')
};

struct DecoherenceReport {
  double epsilon = 0.0;          // requested precision
  double attained_epsilon = 0.0; // max |D| / sqrt(p p') over distinct pairs above the floor
  double max_ratio = 0.0;        // attained_epsilon^2
  PairRatio worst_pair;
  std::size_t evaluated_pairs = 0;
  std::size_t trivially_decoherent = 0;  // p p' below the floor
  std::size_t violating_count = 0;       // |D|^2 >= eps^2 p p'
  std::vector<PairRatio> violating;      // first few violators, ordered by index
};

DecoherenceReport decoherence_report(const DecoherenceMatrix& d, double epsilon,
                                     double probability_floor = 1e-20,
                                     std::size_t max_listed = 32);

/// Coarse classes of fine histories keyed by the window index of every
/// photon run's first step (window k covers steps [k w, (k+1) w)). The empty
/// key is "no photon". Histories with any photon run longer than w steps
/// are leakage. Runs cut off by the end of the record stay in their class.
struct CoarseGrainResult {
  int window_steps = 0;
  std::map<std::vector<int>, double> classes;
  double leakage = 0.0;

  double no_photon() const;
  double total() const;  // sum of classes + leakage
};

CoarseGrainResult coarse_grain_absorption(std::span<const double> probabilities, int n_steps,
                                          int window_steps);
CoarseGrainResult coarse_grain_absorption(const DecoherenceMatrix& d, int window_steps);

}  // namespace qjh
