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

#include "qjh/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace qjh {

using nlohmann::json;

void write_records(std::ostream& out, std::span<const TrajectoryRecord> records) {
  out << "# qjh trajectory records v1\n";
  out << "# seed\tjump_steps\tweight\n";
  for (const auto& r : records) {
    out << r.seed << '\t';
    if (r.jump_steps.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < r.jump_steps.size(); ++i) out << (i ? "," : "") << r.jump_steps[i];
    }
    out << '\t' << format_double(r.weight) << '\n';
  }
}

std::vector<RecordLine> read_records(std::istream& in) {
  std::vector<RecordLine> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string seed, jumps, weight;
    if (!std::getline(ls, seed, '\t') || !std::getline(ls, jumps, '\t') || !std::getline(ls, weight)) {
      throw Error("records line " + std::to_string(lineno) + ": expected three tab-separated fields");
    }
    RecordLine rec;
    try {
      std::size_t used = 0;
      rec.seed = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument("seed");
      rec.weight = std::stod(weight, &used);
      if (used != weight.size()) throw std::invalid_argument("weight");
      if (jumps != "-") {
        std::istringstream js(jumps);
        std::string item;
        while (std::getline(js, item, ',')) {
          rec.jump_steps.push_back(std::stoi(item, &used));
          if (used != item.size()) throw std::invalid_argument("jump step");
        }
      }
    } catch (const std::exception&) {
      throw Error("records line " + std::to_string(lineno) + ": malformed field");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

const char* convention_name(ProjectionConvention c) {
  return c == ProjectionConvention::Literal ? "literal" : "project_after_step";
}

}  // namespace

json to_json(const ModelParams& p) {
  json j;
  j["kappa"] = p.kappa;
  j["gamma1"] = p.gamma1;
  j["gamma2"] = p.gamma2;
  j["G"] = p.G();
  j["d_sys"] = p.d_sys;
  j["dt"] = p.dt;
  j["n_steps"] = p.n_steps;
  json h0 = json::array();
  const Matrix h = p.h0_matrix();
  for (Index r = 0; r < h.rows(); ++r)
    for (Index c = 0; c < h.cols(); ++c) h0.push_back(complex_json(h(r, c)));
  j["h0"] = h0;
  json psi = json::array();
  const Vector v = p.psi0();
  for (Index i = 0; i < v.size(); ++i) psi.push_back(complex_json(v(i)));
  j["psi0"] = psi;
  return j;
}

json to_json(const InvariantSummary& s) {
  return {{"hermiticity_error", s.hermiticity_error},
          {"min_diagonal", s.min_diagonal},
          {"max_diagonal_imag", s.max_diagonal_imag},
          {"diagonal_sum", s.diagonal_sum},
          {"grand_sum", complex_json(s.grand_sum)},
          {"ok", s.ok()}};
}

json to_json(const DecoherenceMatrix& d) {
  json j;
  j["params"] = to_json(d.params);
  j["n_steps"] = d.n_steps;
  j["convention"] = convention_name(d.convention);
  j["size"] = d.entries.rows();
  json entries = json::array();
  for (Index r = 0; r < d.entries.rows(); ++r)
    for (Index c = 0; c < d.entries.cols(); ++c) entries.push_back(complex_json(d.entries(r, c)));
  j["entries"] = std::move(entries);
  j["invariants"] = to_json(d.invariants());
  return j;
}

Matrix decoherence_entries_from_json(const json& j) {
  const Index size = j.at("size").get<Index>();
  const json& e = j.at("entries");
  if (static_cast<Index>(e.size()) != size * size) throw Error("decoherence JSON: entry count mismatch");
  Matrix m(size, size);
  for (Index r = 0; r < size; ++r)
    for (Index c = 0; c < size; ++c) {
      const json& z = e[r * size + c];
      m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  return m;
}

json to_json(const DecoherenceReport& r, int n_steps) {
  auto bits = [n_steps](std::uint64_t idx) {
    std::string s;
    for (auto b : history_from_index(idx, n_steps)) s += static_cast<char>('0' + b);
    return s;
  };
  json violating = json::array();
  for (const auto& v : r.violating) {
    violating.push_back({{"h", bits(v.h)}, {"h_prime", bits(v.hp)}, {"ratio", v.ratio}});
  }
  return {{"epsilon", r.epsilon},
          {"attained_epsilon", r.attained_epsilon},
          {"max_ratio", r.max_ratio},
          {"worst_pair", {{"h", bits(r.worst_pair.h)}, {"h_prime", bits(r.worst_pair.hp)}}},
          {"evaluated_pairs", r.evaluated_pairs},
          {"trivially_decoherent", r.trivially_decoherent},
          {"violating_count", r.violating_count},
          {"violating", violating}};
}

json to_json(const CoarseGrainResult& c) {
  json classes = json::array();
  for (const auto& [key, prob] : c.classes) classes.push_back({{"windows", key}, {"probability", prob}});
  return {{"window_steps", c.window_steps},
          {"no_photon", c.no_photon()},
          {"leakage", c.leakage},
          {"total", c.total()},
          {"classes", classes}};
}

json to_json(const ComparisonReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"label", e.label},
                       {"parameter", e.parameter},
                       {"measured", e.measured},
                       {"reference", e.reference},
                       {"relative_error", e.relative_error},
                       {"band", e.band},
                       {"asserted", e.asserted},
                       {"pass", e.pass}});
  }
  return {{"name", r.name}, {"params", to_json(r.params)}, {"entries", entries}, {"pass", r.all_pass()}};
}

json to_json(const ScalingFit& f) {
  json points = json::array();
  for (const auto& p : f.points) {
    points.push_back({{"value", p.value},
                      {"g_dt", p.g_dt},
                      {"ratio", p.ratio},
                      {"log_g_dt", p.log_g_dt},
                      {"log_ratio", p.log_ratio},
                      {"residual", p.residual}});
  }
  return {{"parameter", f.parameter == SweepParameter::Gamma2 ? "gamma2" : "dt"},
          {"pair", f.pair == ScalingPair::LeadingEdge ? "leading_edge" : "no_photon_midpoint"},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"rms_residual", f.rms_residual},
          {"points", points}};
}

json to_json(const SeriesReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{r.parameter_name, row.parameter},
                    {"measured", row.measured},
                    {"band", row.band},
                    {"asserted", row.asserted},
                    {"pass", row.pass}});
  }
  return {{"name", r.name}, {"rows", rows}, {"pass", r.all_pass()}};
}

void write_series_csv(std::ostream& out, const SeriesReport& r) {
  out << "parameter,measured,band,pass\n";
  for (const auto& row : r.rows) {
    out << format_double(row.parameter) << ',' << format_double(row.measured) << ','
        << format_double(row.band) << ',' << (row.asserted ? (row.pass ? "pass" : "fail") : "info")
        << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& r) {
  out << "label,parameter,measured,reference,relative_error,band,asserted,pass\n";
  for (const auto& e : r.entries) {
    out << e.label << ',' << format_double(e.parameter) << ',' << format_double(e.measured) << ','
        << format_double(e.reference) << ',' << format_double(e.relative_error) << ','
        << format_double(e.band) << ',' << (e.asserted ? 1 : 0) << ',' << (e.pass ? 1 : 0) << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const ScalingFit& f) {
  out << "log_g_dt,log_ratio\n";
  for (const auto& p : f.points) out << format_double(p.log_g_dt) << ',' << format_double(p.log_ratio) << '\n';
}

}  // namespace qjh
