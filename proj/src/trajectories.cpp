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

#include "qjh/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "qjh/rng.hpp"

namespace qjh {

Vector evolve_no_jump(const Operator& h_eff, const Vector& psi, double t) {
  if (!(t >= 0.0)) throw PreconditionError("evolve_no_jump: t must be >= 0");
  if (psi.size() != h_eff.dim()) throw DimensionError("evolve_no_jump: dimension mismatch");
  return matrix_exponential(Matrix(-kI * h_eff.matrix()), t) * psi;
}

Vector apply_jump(const Operator& jump_op, const Vector& psi) {
  if (psi.size() != jump_op.dim()) throw DimensionError("apply_jump: dimension mismatch");
  return jump_op.matrix() * psi;
}

int steps_for_horizon(const ModelParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("horizon must be finite and >= 0");
  const double ratio = t / p.dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw PreconditionError("horizon must be an integer multiple of model.dt");
  }
  return static_cast<int>(rounded);
}

TrajectorySampler::TrajectorySampler(const ModelParams& p, double horizon,
                                     std::vector<int> checkpoint_steps,
                                     double max_step_probability)
    : steps_(steps_for_horizon(p, horizon)),
      dt_(p.dt),
      max_q_(max_step_probability),
      checkpoints_(std::move(checkpoint_steps)) {
  const ReducedModel r = build_reduced_model(p);
  rate_ = r.jump_rate_prefactor;
  jump_amplitude_ = std::sqrt(rate_ * dt_);
  step_ = matrix_exponential(Matrix(-kI * r.h_eff.matrix()), dt_);
  jump_ = r.jump_op.matrix();
  psi0_ = p.psi0();
  if (!std::is_sorted(checkpoints_.begin(), checkpoints_.end()) ||
      std::adjacent_find(checkpoints_.begin(), checkpoints_.end()) != checkpoints_.end()) {
    throw PreconditionError("TrajectorySampler: checkpoints must be strictly increasing");
  }
  for (int c : checkpoints_) {
    if (c < 0 || c > steps_) throw PreconditionError("TrajectorySampler: checkpoint out of range");
  }
}

TrajectoryRecord TrajectorySampler::sample(std::uint64_t stream_seed) const {
  PhiloxStream rng(stream_seed);
  TrajectoryRecord rec;
  rec.seed = stream_seed;
  rec.snapshots.reserve(checkpoints_.size());

  Vector psi = psi0_;
  Vector tmp(psi.size());
  auto next_checkpoint = checkpoints_.begin();
  if (next_checkpoint != checkpoints_.end() && *next_checkpoint == 0) {
    rec.snapshots.push_back(psi);
    ++next_checkpoint;
  }

  for (int step = 1; step <= steps_; ++step) {
    tmp.noalias() = step_ * psi;
    psi.swap(tmp);

    const double norm2 = psi.squaredNorm();
    tmp.noalias() = jump_ * psi;
    const double occupation = norm2 > 0.0 ? tmp.squaredNorm() / norm2 : 0.0;
    const double q = rate_ * dt_ * occupation;
    if (q > max_q_) {
      std::ostringstream msg;
      msg << "per-step jump probability " << q << " exceeds " << max_q_ << " at step " << step
          << " (system too highly excited for first-order sampling)";
      throw OverExcitationError(msg.str());
    }
    // One uniform per step keeps stream position equal to the step index.
    const double u = rng.uniform();
    if (u < q) {
      psi = jump_amplitude_ * tmp;
      rec.jump_steps.push_back(step);
    }
    if (next_checkpoint != checkpoints_.end() && *next_checkpoint == step) {
      rec.snapshots.push_back(psi);
      ++next_checkpoint;
    }
  }

  rec.weight = psi.squaredNorm();
  rec.final_state = std::move(psi);
  return rec;
}

TrajectoryRecord sample_trajectory(std::uint64_t seed, const ModelParams& p, double horizon) {
  return TrajectorySampler(p, horizon).sample(seed);
}

std::vector<TrajectoryRecord> sample_ensemble_serial(const TrajectorySampler& sampler,
                                                     std::uint64_t base_seed, int count) {
  if (count < 0) throw PreconditionError("sample_ensemble: count must be >= 0");
  std::vector<TrajectoryRecord> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(sampler.sample(derive_stream_seed(base_seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

std::vector<TrajectoryRecord> sample_ensemble(const TrajectorySampler& sampler,
                                              std::uint64_t base_seed, int count) {
  if (count < 0) throw PreconditionError("sample_ensemble: count must be >= 0");
  std::vector<TrajectoryRecord> out(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < count; ++i) {
    try {
      out[i] = sampler.sample(derive_stream_seed(base_seed, static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical(qjh_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double trajectory_probability(const ModelParams& p, std::span<const int> jump_steps,
                              double horizon) {
  const int total = steps_for_horizon(p, horizon);
  const ReducedModel r = build_reduced_model(p);
  const Matrix gen = -kI * r.h_eff.matrix();
  const Matrix& a = r.jump_op.matrix();

  Vector psi = p.psi0();
  int previous = 0;
  for (int s : jump_steps) {
    if (s <= previous || s > total) {
      throw PreconditionError("trajectory_probability: jump steps must be strictly increasing in [1, n]");
    }
    psi = a * (matrix_exponential(gen, (s - previous) * p.dt) * psi);
    previous = s;
  }
  psi = matrix_exponential(gen, (total - previous) * p.dt) * psi;
  const double prefactor = std::pow(r.jump_rate_prefactor * p.dt, jump_steps.size());
  return prefactor * psi.squaredNorm();
}

Matrix ensemble_average(std::span<const TrajectoryRecord> records, EnsembleWeighting weighting,
                        int checkpoint) {
  if (records.empty()) throw PreconditionError("ensemble_average: empty record set");
  auto state_of = [&](const TrajectoryRecord& r) -> const Vector& {
    if (checkpoint < 0) return r.final_state;
    if (checkpoint >= static_cast<int>(r.snapshots.size())) {
      throw PreconditionError("ensemble_average: checkpoint not recorded");
    }
    return r.snapshots[checkpoint];
  };

  const Index d = state_of(records.front()).size();
  Matrix acc = Matrix::Zero(d, d);
  double total = 0.0;
  for (const auto& r : records) {
    const Vector& psi = state_of(r);
    if (psi.size() != d) throw DimensionError("ensemble_average: mixed dimensions");
    const double n2 = psi.squaredNorm();
    if (n2 == 0.0) continue;
    const double w = weighting == EnsembleWeighting::Sampled ? 1.0 : n2;
    acc += (w / n2) * (psi * psi.adjoint());
    total += w;
  }
  if (!(total > 0.0)) throw NumericalError("ensemble_average: all records have zero weight");
  return acc / total;
}

}  // namespace qjh
