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

#include <cstdint>
#include <span>
#include <vector>

#include "qjh/hilbert.hpp"
#include "qjh/model.hpp"

namespace qjh {

/// Raised when a per-step jump probability exceeds the first-order limit.
class OverExcitationError : public Error {
 public:
  using Error::Error;
};

/// One quantum-jump trajectory of the reduced model.
///
/// Step j (1-based) covers ((j-1) dt, j dt]: the state is evolved by
/// e^{-i Heff dt} and then possibly jumps, so a jump at step j happens at
/// t_j = j dt. The unnormalised state picks up sqrt(2 dt kappa^2 / G) per
/// jump, which makes `weight` the trajectory probability of its jump pattern.
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<int> jump_steps;
  Vector final_state;
  double weight = 0.0;
  std::vector<Vector> snapshots;  // unnormalised states at the sampler's checkpoints
};

/// psi -> exp(-i Heff t) psi.
Vector evolve_no_jump(const Operator& h_eff, const Vector& psi, double t);
/// psi -> a psi. The zero vector is a legal result.
Vector apply_jump(const Operator& jump_op, const Vector& psi);

/// Number of dt steps in a horizon; throws PreconditionError unless t is a
/// non-negative integer multiple of dt.
int steps_for_horizon(const ModelParams& p, double t);

/// First-order MCWF sampler with the no-jump step propagator precomputed.
class TrajectorySampler {
 public:
  TrajectorySampler(const ModelParams& p, double horizon,
                    std::vector<int> checkpoint_steps = {},
                    double max_step_probability = 0.1);

  /// Deterministic in the stream seed. Throws OverExcitationError when a
  /// per-step jump probability exceeds the configured limit.
  TrajectoryRecord sample(std::uint64_t stream_seed) const;

  int steps() const { return steps_; }
  double dt() const { return dt_; }
  const std::vector<int>& checkpoints() const { return checkpoints_; }
  const Vector& initial_state() const { return psi0_; }

  /// 2 kappa^2 dt / G: the jump probability per step from an |n=1> state.
  double jump_probability_prefactor() const { return rate_ * dt_; }

 private:
  int steps_ = 0;
  double dt_ = 0.0;
  double rate_ = 0.0;
  double max_q_ = 0.1;
  double jump_amplitude_ = 0.0;
  Matrix step_;
  Matrix jump_;
  Vector psi0_;
  std::vector<int> checkpoints_;
};

TrajectoryRecord sample_trajectory(std::uint64_t seed, const ModelParams& p, double horizon);

/// M trajectories with stream seeds derive_stream_seed(base_seed, i).
/// OpenMP-parallel; results are independent of thread count and schedule.
std::vector<TrajectoryRecord> sample_ensemble(const TrajectorySampler& sampler,
                                              std::uint64_t base_seed, int count);
/// Single-threaded reference for sample_ensemble.
std::vector<TrajectoryRecord> sample_ensemble_serial(const TrajectorySampler& sampler,
                                                     std::uint64_t base_seed, int count);

/// (2 dt kappa^2/G)^N Tr{ e^{-i Heff (T - t_N)} a ... a e^{-i Heff t_1} |psi><psi| ... }
/// evaluated with one matrix exponential per inter-jump interval.
double trajectory_probability(const ModelParams& p, std::span<const int> jump_steps,
                              double horizon);

enum class EnsembleWeighting {
  Sampled,     // plain mean of normalised projectors
  Enumerated,  // mean weighted by each record's probability
};

/// Average of |psi~><psi~| over the records, at the final time or at
/// snapshot `checkpoint` when checkpoint >= 0. Throws on empty input.
Matrix ensemble_average(std::span<const TrajectoryRecord> records,
                        EnsembleWeighting weighting = EnsembleWeighting::Sampled,
                        int checkpoint = -1);

}  // namespace qjh
