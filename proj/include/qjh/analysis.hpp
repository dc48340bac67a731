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
#include <string>
#include <vector>

#include "qjh/histories.hpp"
#include "qjh/model.hpp"
#include "qjh/trajectories.hpp"

namespace qjh {

/// Raised when a fit or sweep has nothing to fit (all ratios zero, too few
/// points, or too narrow a span).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Band constants. Every first-order comparison is asserted against
/// headroom * (sum of the dropped-term magnitudes).
struct BandConfig {
  double headroom = 10.0;
  double ratio_floor = 1e-30;
};

/// |measured - reference| / max(reference, floor).
double relative_error(double measured, double reference, double floor = 1e-30);

struct ComparisonEntry {
  std::string label;
  double parameter = 0.0;  // step index, k, or time, depending on the report
  double measured = 0.0;   // history-derived (exact propagator)
  double reference = 0.0;  // first-order formula
  double relative_error = 0.0;
  double band = 0.0;
  bool asserted = true;
  bool pass = true;
};

struct ComparisonReport {
  std::string name;
  ModelParams params;
  std::vector<ComparisonEntry> entries;

  bool all_pass() const;
};

/// Probability of the all-zeros history (n_steps projections) against
/// Tr{e^{-i Heff N dt} |psi><psi| e^{i Heff^dag N dt}}, within
/// C (1/(G dt) + gamma1 dt + kappa^2 N dt / G).
ComparisonReport compare_no_jump(const ModelParams& p, const BandConfig& band = {});

/// Photon first registered at time jump_step*dt and absorbed within
/// window_steps, against (2 dt kappa^2/G) Tr{a e^{-i Heff t} |psi><psi| e^{i Heff^dag t} a^dag}.
/// Band as compare_no_jump plus exp(-gamma1 window_steps dt) leakage.
ComparisonReport compare_one_jump(const ModelParams& p, int jump_step, int window_steps,
                                  const BandConfig& band = {});

/// P(mode still excited k steps after registering a photon at jump_step)
/// against (1 - gamma1 dt)^k for k = 1..k_max, within C (1/(G dt) + gamma1 dt).
ComparisonReport compare_post_jump_persistence(const ModelParams& p, int jump_step, int k_max,
                                               const BandConfig& band = {});

enum class SweepParameter { Gamma2, Dt };

enum class ScalingPair {
  /// Photon registered at steps m-1 and m vs. at m only: the two histories
  /// differ in one projection at the photon's leading edge.
  LeadingEdge,
  /// All zeros vs. a single photon at m.
  NoPhotonMidpoint,
};

struct ScalingPoint {
  double value = 0.0;  // swept parameter
  double g_dt = 0.0;
  double ratio = 0.0;  // |D[h,h']|^2 / (p(h) p(h'))
  double log_g_dt = 0.0;
  double log_ratio = 0.0;
  double residual = 0.0;
};

struct ScalingFit {
  SweepParameter parameter = SweepParameter::Gamma2;
  ScalingPair pair = ScalingPair::LeadingEdge;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares slope of log ratio vs log(G dt) for the canonical pair of
/// n_steps-long histories. Needs >= 4 points spanning >= x30 in G dt;
/// throws DegenerateInputError otherwise or when any ratio is not positive.
ScalingFit decoherence_scaling(const ModelParams& base, SweepParameter parameter,
                               const std::vector<double>& values,
                               ScalingPair pair = ScalingPair::LeadingEdge);

struct SeriesRow {
  double parameter = 0.0;
  double measured = 0.0;
  double band = 0.0;
  bool asserted = true;
  bool pass = true;
};

struct SeriesReport {
  std::string name;
  std::string parameter_name;
  std::vector<SeriesRow> rows;

  bool all_pass() const;
};

/// n evenly spaced step indices in (0, total_steps], duplicates dropped.
std::vector<int> even_checkpoints(int total_steps, int n_checkpoints);

/// Trace distance between the ensemble average of existing records (their
/// snapshots at checkpoint_steps) and the exact reduced evolution.
SeriesReport ensemble_consistency(const ModelParams& p, std::span<const TrajectoryRecord> records,
                                  const std::vector<int>& checkpoint_steps, double horizon);

/// Trace distance between the MCWF ensemble average (M trajectories) and
/// the exact reduced evolution at n_checkpoints evenly spaced times up to
/// the horizon; band 3/sqrt(M) + 2 kappa^2 dt T / G. Requires M >= 100.
SeriesReport unraveling_consistency(const ModelParams& p, int trajectories, double horizon,
                                    std::uint64_t seed, int n_checkpoints = 5);

/// Trace distance between the system marginal of the total model and the
/// reduced model at log-spaced times in [1/gamma1, horizon]; asserted
/// (band C kappa/gamma1) for t >= 10/gamma1. A final row compares the
/// worst asserted error against a rerun with gamma2 x 10, which must be
/// smaller. Requires horizon >= 10/gamma1.
SeriesReport adiabatic_validity(const ModelParams& p, double horizon,
                                const BandConfig& band = {}, int n_samples = 8);

}  // namespace qjh
