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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qjh/analysis.hpp"
#include "qjh/histories.hpp"
#include "qjh/model.hpp"

namespace qjh {

/// Malformed or out-of-range configuration; the message names the key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat dotted keys, e.g. "model.kappa" -> "0.05". Ordered for stable output.
using FlatConfig = std::map<std::string, std::string>;

/// Parses `key = value` lines. '#' starts a comment; blank lines are
/// ignored; a repeated key keeps the last value.
FlatConfig parse_flat_config(std::istream& in, const std::string& source = "<config>");
FlatConfig load_flat_config(const std::string& path);

/// Overlays `overrides` on `base` (CLI flags over file values).
FlatConfig merge(FlatConfig base, const FlatConfig& overrides);

std::string render_flat_config(const FlatConfig& cfg);

/// Fully resolved run configuration.
struct RunConfig {
  ModelParams model;

  std::uint64_t seed = 20260101;
  std::string out_root;  // empty: $QJH_OUTPUT_ROOT or ./qjh-runs
  double t_final = 0.0;  // resolved to n_steps * dt when unset

  int traj_count = 1000;
  int checkpoints = 5;
  double max_step_probability = 0.1;

  int n_cap = 10;
  ProjectionConvention convention = ProjectionConvention::Literal;
  double epsilon = 0.1;
  double probability_floor = 1e-20;

  double band_constant = 10.0;
  int window_steps = 0;       // resolved to round(5 / (gamma1 dt)) when unset
  int jump_step = 0;          // resolved to max(1, n_steps / 2) when unset
  int persistence_steps = 0;  // resolved to window_steps when unset
  int adiabatic_samples = 8;

  SweepParameter sweep_parameter = SweepParameter::Gamma2;
  std::vector<double> sweep;
  ScalingPair scaling_pair = ScalingPair::LeadingEdge;
  double slope_target = -2.0;
  double slope_tolerance = 0.3;
};

/// Validates every key and value, fills derived defaults and checks the
/// model. Throws ConfigError naming the offending key.
RunConfig resolve_config(const FlatConfig& flat);

/// Flat form of a resolved config; resolve_config(to_flat_config(c))
/// reproduces c.
FlatConfig to_flat_config(const RunConfig& cfg);

/// Known keys with one-line descriptions, in documentation order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

std::string format_double(double v);

}  // namespace qjh
