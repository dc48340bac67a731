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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qjh/analysis.hpp"
#include "qjh/config.hpp"
#include "qjh/histories.hpp"
#include "qjh/trajectories.hpp"

namespace qjh {

// Trajectory record file: one trajectory per line,
//   <seed> TAB <jump steps, comma separated, or '-'> TAB <weight %.17g>
// preceded by '#' header lines.
void write_records(std::ostream& out, std::span<const TrajectoryRecord> records);

struct RecordLine {
  std::uint64_t seed = 0;
  std::vector<int> jump_steps;
  double weight = 0.0;
};

/// Throws Error on malformed lines.
std::vector<RecordLine> read_records(std::istream& in);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const InvariantSummary& s);
/// params, n_steps, convention, entries as row-major [re, im] pairs, invariants.
nlohmann::json to_json(const DecoherenceMatrix& d);
nlohmann::json to_json(const DecoherenceReport& r, int n_steps);
nlohmann::json to_json(const CoarseGrainResult& c);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const ScalingFit& f);
nlohmann::json to_json(const SeriesReport& r);

/// Inverse of to_json(DecoherenceMatrix) for the entry payload.
Matrix decoherence_entries_from_json(const nlohmann::json& j);

/// CSV: parameter,measured,band,pass
void write_series_csv(std::ostream& out, const SeriesReport& r);
/// CSV: label,parameter,measured,reference,relative_error,band,asserted,pass
void write_comparison_csv(std::ostream& out, const ComparisonReport& r);
/// CSV: log_g_dt,log_ratio
void write_scaling_csv(std::ostream& out, const ScalingFit& f);

}  // namespace qjh
