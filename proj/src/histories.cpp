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

#include "qjh/histories.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>

namespace qjh {

std::uint64_t history_index(const History& h) {
  if (h.size() > 63) throw PreconditionError("history_index: history longer than 63 steps");
  std::uint64_t idx = 0;
  for (std::uint8_t a : h) {
    if (a > 1) throw PreconditionError("history_index: entries must be 0 or 1");
    idx = (idx << 1) | a;
  }
  return idx;
}

History history_from_index(std::uint64_t index, int n_steps) {
  History h(n_steps);
  for (int k = n_steps - 1; k >= 0; --k) {
    h[k] = static_cast<std::uint8_t>(index & 1u);
    index >>= 1;
  }
  return h;
}

Operator projector(int alpha, Index d_sys) {
  if (alpha != 0 && alpha != 1) throw PreconditionError("projector: alpha must be 0 or 1");
  Matrix mode = Matrix::Zero(2, 2);
  mode(alpha, alpha) = 1.0;
  return Operator(tensor(Matrix::Identity(d_sys, d_sys), mode));
}

namespace {

Matrix initial_total_state(const ModelParams& p) {
  const Vector psi = p.psi0();
  Vector mode = Vector::Zero(2);
  mode(0) = 1.0;
  Vector big(2 * p.d_sys);
  for (Index i = 0; i < p.d_sys; ++i)
    for (Index m = 0; m < 2; ++m) big(2 * i + m) = psi(i) * mode(m);
  return big * big.adjoint();
}

}  // namespace

HistoryEvaluator::HistoryEvaluator(const ModelParams& p, ProjectionConvention convention)
    : convention_(convention),
      step_(build_propagator(build_total_model(p), p.dt)),
      initial_(initial_total_state(p)),
      proj_{projector(0, p.d_sys), projector(1, p.d_sys)} {}

Complex HistoryEvaluator::functional(const History& h, const History& hp) const {
  if (h.size() != hp.size()) throw DimensionError("decoherence_functional: history lengths differ");
  if (h.empty()) throw PreconditionError("decoherence_functional: empty history");
  Matrix x = initial_;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] > 1 || hp[k] > 1) throw PreconditionError("decoherence_functional: entries must be 0 or 1");
    if (k > 0 || convention_ == ProjectionConvention::ProjectAfterStep) x = step_.apply(x);
    x = proj_[h[k]].matrix() * x * proj_[hp[k]].matrix();
  }
  return x.trace();
}

std::vector<double> HistoryEvaluator::prefix_probabilities(const History& h) const {
  if (h.empty()) throw PreconditionError("prefix_probabilities: empty history");
  std::vector<double> out;
  out.reserve(h.size());
  Matrix x = initial_;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] > 1) throw PreconditionError("prefix_probabilities: entries must be 0 or 1");
    if (k > 0 || convention_ == ProjectionConvention::ProjectAfterStep) x = step_.apply(x);
    const Matrix& proj = proj_[h[k]].matrix();
    x = proj * x * proj;
    out.push_back(x.trace().real());
  }
  return out;
}

Complex decoherence_functional(const ModelParams& p, const History& h, const History& hp,
                               ProjectionConvention convention) {
  return HistoryEvaluator(p, convention).functional(h, hp);
}

bool InvariantSummary::ok(double tol) const {
  return hermiticity_error <= tol && min_diagonal >= -tol && max_diagonal_imag <= tol &&
         std::abs(diagonal_sum - 1.0) <= tol && std::abs(grand_sum - Complex(1.0, 0.0)) <= tol;
}

std::vector<double> DecoherenceMatrix::probabilities() const {
  std::vector<double> p(entries.rows());
  for (Index i = 0; i < entries.rows(); ++i) p[i] = entries(i, i).real();
  return p;
}

InvariantSummary DecoherenceMatrix::invariants() const {
  InvariantSummary s;
  s.hermiticity_error = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  s.min_diagonal = entries.diagonal().real().minCoeff();
  s.max_diagonal_imag = entries.diagonal().imag().cwiseAbs().maxCoeff();
  s.diagonal_sum = entries.diagonal().real().sum();
  s.grand_sum = entries.sum();
  return s;
}

namespace {

// Pair-tree recursion on d_sys x d_sys blocks. A node holds the block
// (alpha, alpha') of the unnormalised operator after its last projection,
// column-stacked in system space. Propagating and projecting onto a child
// pair is one precomputed sub-block of the step superoperator.
class PairTree {
 public:
  PairTree(const ModelParams& p, ProjectionConvention convention)
      : n_(p.n_steps), ds_(p.d_sys), ds2_(ds_ * ds_) {
    const Superoperator step = build_propagator(build_total_model(p), p.dt);
    const Index d = 2 * ds_;
    std::array<std::vector<Index>, 4> idx;
    for (int pair = 0; pair < 4; ++pair) {
      const int a = pair >> 1, b = pair & 1;
      idx[pair].resize(ds2_);
      for (Index j = 0; j < ds_; ++j)
        for (Index i = 0; i < ds_; ++i) idx[pair][i + j * ds_] = (2 * i + a) + (2 * j + b) * d;
    }
    for (int c = 0; c < 4; ++c)
      for (int par = 0; par < 4; ++par) kernel_[c][par] = step.matrix()(idx[c], idx[par]);

    Vector init = vectorize(initial_total_state(p));
    if (convention == ProjectionConvention::ProjectAfterStep) init = step.matrix() * init;
    for (int pair = 0; pair < 4; ++pair) root_[pair] = init(idx[pair]);
  }

  struct Node {
    int depth;  // projections applied so far
    int pair;   // 2*alpha + alpha' of the last projection
    std::uint64_t row, col;
    Vector x;
  };

  std::vector<Node> roots() const {
    std::vector<Node> out;
    for (int pair = 0; pair < 4; ++pair) {
      if (root_[pair].isZero(0.0)) continue;
      out.push_back({1, pair, static_cast<std::uint64_t>(pair >> 1),
                     static_cast<std::uint64_t>(pair & 1), root_[pair]});
    }
    return out;
  }

  std::vector<Node> expand(const std::vector<Node>& level) const {
    std::vector<Node> out;
    for (const Node& n : level) {
      if (n.depth == n_) {
        out.push_back(n);
        continue;
      }
      for (int c = 0; c < 4; ++c) {
        Vector y = kernel_[c][n.pair] * n.x;
        if (y.isZero(0.0)) continue;
        out.push_back({n.depth + 1, c, (n.row << 1) | static_cast<std::uint64_t>(c >> 1),
                       (n.col << 1) | static_cast<std::uint64_t>(c & 1), std::move(y)});
      }
    }
    return out;
  }

  void descend(const Node& n, Matrix& out) const {
    std::vector<Vector> scratch(n_ + 1, Vector(ds2_));
    descend(n.depth, n.pair, n.x, n.row, n.col, out, scratch);
  }

 private:
  void descend(int depth, int pair, const Vector& x, std::uint64_t row, std::uint64_t col,
               Matrix& out, std::vector<Vector>& scratch) const {
    if (depth == n_) {
      if ((pair >> 1) == (pair & 1)) {
        Complex tr = 0.0;
        for (Index i = 0; i < ds_; ++i) tr += x(i + i * ds_);
        out(static_cast<Index>(row), static_cast<Index>(col)) = tr;
      }
      return;
    }
    Vector& y = scratch[depth + 1];
    for (int c = 0; c < 4; ++c) {
      y.noalias() = kernel_[c][pair] * x;
      if (y.isZero(0.0)) continue;
      descend(depth + 1, c, y, (row << 1) | static_cast<std::uint64_t>(c >> 1),
              (col << 1) | static_cast<std::uint64_t>(c & 1), out, scratch);
    }
  }

  int n_;
  Index ds_, ds2_;
  Matrix kernel_[4][4];
  Vector root_[4];
};

DecoherenceMatrix prepare(const ModelParams& p, const DecoherenceOptions& opts) {
  p.validate();
  if (p.n_steps > opts.n_cap) {
    throw PreconditionError("full_decoherence_matrix: n_steps exceeds histories.n_cap");
  }
  if (opts.n_cap > 12) throw PreconditionError("full_decoherence_matrix: n_cap above 12 is not supported");
  DecoherenceMatrix d;
  d.n_steps = p.n_steps;
  d.convention = opts.convention;
  d.params = p;
  const Index size = Index{1} << p.n_steps;
  d.entries = Matrix::Zero(size, size);
  return d;
}

}  // namespace

DecoherenceMatrix full_decoherence_matrix_serial(const ModelParams& p,
                                                 const DecoherenceOptions& opts) {
  DecoherenceMatrix d = prepare(p, opts);
  const PairTree tree(p, opts.convention);
  for (const auto& root : tree.roots()) tree.descend(root, d.entries);
  return d;
}

DecoherenceMatrix full_decoherence_matrix(const ModelParams& p, const DecoherenceOptions& opts) {
  DecoherenceMatrix d = prepare(p, opts);
  const PairTree tree(p, opts.convention);
  // Split the tree a few levels down so threads get independent subtrees.
  std::vector<PairTree::Node> frontier = tree.roots();
  for (int level = 1; level < std::min(p.n_steps, 3); ++level) frontier = tree.expand(frontier);

  const int count = static_cast<int>(frontier.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      tree.descend(frontier[i], d.entries);
    } catch (...) {
#pragma omp critical(qjh_histories_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return d;
}

DecoherenceReport decoherence_report(const DecoherenceMatrix& d, double epsilon,
                                     double probability_floor, std::size_t max_listed) {
  DecoherenceReport r;
  r.epsilon = epsilon;
  const std::vector<double> p = d.probabilities();
  const Index n = d.entries.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double pp = p[i] * p[j];
      if (!(pp >= probability_floor)) {
        ++r.trivially_decoherent;
        continue;
      }
      ++r.evaluated_pairs;
      const double ratio = std::norm(d.entries(i, j)) / pp;
      const PairRatio pr{static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), ratio};
      if (ratio > r.max_ratio) {
        r.max_ratio = ratio;
        r.worst_pair = pr;
      }
      if (ratio >= epsilon * epsilon) {
        ++r.violating_count;
        if (r.violating.size() < max_listed) r.violating.push_back(pr);
      }
    }
  }
  r.attained_epsilon = std::sqrt(r.max_ratio);
  return r;
}

double CoarseGrainResult::no_photon() const {
  const auto it = classes.find({});
  return it == classes.end() ? 0.0 : it->second;
}

double CoarseGrainResult::total() const {
  double t = leakage;
  for (const auto& [key, prob] : classes) t += prob;
  return t;
}

CoarseGrainResult coarse_grain_absorption(std::span<const double> probabilities, int n_steps,
                                          int window_steps) {
  if (window_steps < 1) throw PreconditionError("coarse_grain_absorption: window shorter than one step");
  if (n_steps < 1 || n_steps > 30) throw PreconditionError("coarse_grain_absorption: n_steps out of range");
  if (probabilities.size() != (std::size_t{1} << n_steps)) {
    throw DimensionError("coarse_grain_absorption: need 2^n_steps probabilities");
  }
  CoarseGrainResult out;
  out.window_steps = window_steps;
  std::vector<int> key;
  for (std::size_t idx = 0; idx < probabilities.size(); ++idx) {
    const History h = history_from_index(idx, n_steps);
    key.clear();
    bool leaked = false;
    int s = 0;
    while (s < n_steps) {
      if (h[s] == 0) {
        ++s;
        continue;
      }
      const int start = s;
      while (s < n_steps && h[s] == 1) ++s;
      if (s - start > window_steps) leaked = true;
      key.push_back(start / window_steps);
    }
    if (leaked) {
      out.leakage += probabilities[idx];
    } else {
      out.classes[key] += probabilities[idx];
    }
  }
  return out;
}

CoarseGrainResult coarse_grain_absorption(const DecoherenceMatrix& d, int window_steps) {
  const std::vector<double> p = d.probabilities();
  return coarse_grain_absorption(p, d.n_steps, window_steps);
}

}  // namespace qjh
