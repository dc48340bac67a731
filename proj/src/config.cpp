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

#include "qjh/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace qjh {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError(key + ": invalid value '" + value + "' (" + why + ")");
}

double parse_real(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) bad(key, value, "expected a number");
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
    bad(key, value, "expected a finite number");
  }
  return d;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) bad(key, value, "expected an integer");
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) bad(key, value, "expected an integer");
  return n;
}

int parse_int_range(const std::string& key, const std::string& value, long long lo, long long hi) {
  const long long n = parse_integer(key, value);
  if (n < lo || n > hi) {
    bad(key, value, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(n);
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty() || v[0] == '-') bad(key, value, "expected an unsigned 64-bit integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 0);
  if (end != v.c_str() + v.size() || errno == ERANGE) bad(key, value, "expected an unsigned 64-bit integer");
  return n;
}

Complex parse_complex(const std::string& key, const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) return {parse_real(key, token), 0.0};
  return {parse_real(key, token.substr(0, colon)), parse_real(key, token.substr(colon + 1))};
}

std::string render_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  return format_double(c.real()) + ":" + format_double(c.imag());
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& t : split_list(value)) out.push_back(parse_real(key, t));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

struct Pending {
  std::string h0_kind = "zero";
  std::string h0_values;
  std::string psi0;
  bool window_set = false, jump_set = false, persistence_set = false, t_final_set = false;
};

using Handler = std::function<void(RunConfig&, Pending&, const std::string&, const std::string&)>;

struct KeySpec {
  std::string key;
  std::string help;
  Handler apply;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"model.kappa", "system-mode coupling kappa (rad/time, >= 0)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.kappa = parse_real(k, v); }},
      {"model.gamma1", "output-mode absorption rate Gamma1 (> 0)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.gamma1 = parse_real(k, v); }},
      {"model.gamma2", "output-mode dephasing rate Gamma2 (> 0)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.gamma2 = parse_real(k, v); }},
      {"model.d_sys", "system dimension (2 = two-level atom, n = truncated oscillator)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.d_sys = parse_int_range(k, v, 2, 8); }},
      {"model.h0", "system Hamiltonian kind: zero | diagonal | matrix",
       [](RunConfig&, Pending& p, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t != "zero" && t != "diagonal" && t != "matrix") bad(k, v, "expected zero, diagonal or matrix");
         p.h0_kind = t;
       }},
      {"model.h0.values", "diagonal: d_sys reals; matrix: d_sys^2 row-major entries re[:im]",
       [](RunConfig&, Pending& p, const std::string&, const std::string& v) { p.h0_values = v; }},
      {"model.dt", "projection spacing dt (> 0)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.dt = parse_real(k, v); }},
      {"model.n_steps", "number of projections / steps N",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.model.n_steps = parse_int_range(k, v, 1, 100000000); }},
      {"model.psi0", "initial system amplitudes re[:im], comma separated (empty: top level)",
       [](RunConfig&, Pending& p, const std::string&, const std::string& v) { p.psi0 = v; }},
      {"run.seed", "64-bit base seed",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.seed = parse_seed(k, v); }},
      {"run.out", "output root directory (empty: $QJH_OUTPUT_ROOT or ./qjh-runs)",
       [](RunConfig& c, Pending&, const std::string&, const std::string& v) { c.out_root = trim(v); }},
      {"run.t_final", "horizon T for trajectories/validate (default n_steps*dt)",
       [](RunConfig& c, Pending& p, const std::string& k, const std::string& v) {
         c.t_final = parse_real(k, v);
         if (c.t_final <= 0.0) bad(k, v, "must be > 0");
         p.t_final_set = true;
       }},
      {"trajectories.count", "number of trajectories M",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.traj_count = parse_int_range(k, v, 1, 100000000); }},
      {"trajectories.checkpoints", "ensemble checkpoints up to the horizon",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.checkpoints = parse_int_range(k, v, 1, 1000); }},
      {"trajectories.max_step_probability", "abort when a per-step jump probability exceeds this",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.max_step_probability = parse_real(k, v);
         if (c.max_step_probability <= 0.0 || c.max_step_probability > 1.0) bad(k, v, "must lie in (0, 1]");
       }},
      {"histories.n_cap", "largest N for full decoherence matrices (<= 12)",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.n_cap = parse_int_range(k, v, 1, 12); }},
      {"histories.convention", "literal | project_after_step",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "literal") c.convention = ProjectionConvention::Literal;
         else if (t == "project_after_step") c.convention = ProjectionConvention::ProjectAfterStep;
         else bad(k, v, "expected literal or project_after_step");
       }},
      {"histories.epsilon", "sum-rule precision used to count violating pairs",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.epsilon = parse_real(k, v);
         if (c.epsilon <= 0.0) bad(k, v, "must be > 0");
       }},
      {"histories.probability_floor", "pairs with p p' below this are trivially decoherent",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.probability_floor = parse_real(k, v);
         if (c.probability_floor < 0.0) bad(k, v, "must be >= 0");
       }},
      {"analysis.band_constant", "headroom C on first-order error bands",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.band_constant = parse_real(k, v);
         if (c.band_constant <= 0.0) bad(k, v, "must be > 0");
       }},
      {"analysis.window_steps", "absorption window in steps (default round(5/(gamma1 dt)))",
       [](RunConfig& c, Pending& p, const std::string& k, const std::string& v) {
         c.window_steps = parse_int_range(k, v, 1, 100000000);
         p.window_set = true;
       }},
      {"analysis.jump_step", "step of the registered photon for compare (default n_steps/2)",
       [](RunConfig& c, Pending& p, const std::string& k, const std::string& v) {
         c.jump_step = parse_int_range(k, v, 1, 100000000);
         p.jump_set = true;
       }},
      {"analysis.persistence_steps", "k_max for the post-jump persistence law (default window_steps)",
       [](RunConfig& c, Pending& p, const std::string& k, const std::string& v) {
         c.persistence_steps = parse_int_range(k, v, 1, 100000000);
         p.persistence_set = true;
       }},
      {"analysis.adiabatic_samples", "sample times for validate",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.adiabatic_samples = parse_int_range(k, v, 2, 1000); }},
      {"scaling.parameter", "swept parameter: gamma2 | dt",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "gamma2") c.sweep_parameter = SweepParameter::Gamma2;
         else if (t == "dt") c.sweep_parameter = SweepParameter::Dt;
         else bad(k, v, "expected gamma2 or dt");
       }},
      {"scaling.sweep", "comma-separated sweep values",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.sweep = parse_real_list(k, v);
         for (double x : c.sweep)
           if (x <= 0.0) bad(k, v, "sweep values must be > 0");
       }},
      {"scaling.pair", "canonical pair: leading_edge | no_photon_midpoint",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "leading_edge") c.scaling_pair = ScalingPair::LeadingEdge;
         else if (t == "no_photon_midpoint") c.scaling_pair = ScalingPair::NoPhotonMidpoint;
         else bad(k, v, "expected leading_edge or no_photon_midpoint");
       }},
      {"scaling.slope_target", "expected log-log slope",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) { c.slope_target = parse_real(k, v); }},
      {"scaling.slope_tolerance", "accepted deviation from the target slope",
       [](RunConfig& c, Pending&, const std::string& k, const std::string& v) {
         c.slope_tolerance = parse_real(k, v);
         if (c.slope_tolerance < 0.0) bad(k, v, "must be >= 0");
       }},
  };
  return table;
}

}  // namespace

FlatConfig parse_flat_config(std::istream& in, const std::string& source) {
  FlatConfig out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

FlatConfig load_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_flat_config(in, path);
}

FlatConfig merge(FlatConfig base, const FlatConfig& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

std::string render_flat_config(const FlatConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg) out += k + " = " + v + "\n";
  return out;
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const auto keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& entry : key_table()) out.emplace_back(entry.key, entry.help);
    return out;
  }();
  return keys;
}

RunConfig resolve_config(const FlatConfig& flat) {
  RunConfig c;
  Pending pending;
  for (const auto& [key, value] : flat) {
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const KeySpec& s) { return s.key == key; });
    if (it == table.end()) throw ConfigError(key + ": unknown configuration key");
    it->apply(c, pending, key, value);
  }

  const int d = c.model.d_sys;
  if (pending.h0_kind == "zero") {
    if (!trim(pending.h0_values).empty()) {
      bad("model.h0.values", pending.h0_values, "model.h0 = zero takes no values");
    }
    c.model.h0 = SystemHamiltonian::zero();
  } else if (pending.h0_kind == "diagonal") {
    std::vector<double> f = parse_real_list("model.h0.values", pending.h0_values);
    if (static_cast<int>(f.size()) != d) bad("model.h0.values", pending.h0_values, "need d_sys values");
    c.model.h0 = SystemHamiltonian::diagonal(std::move(f));
  } else {
    const auto tokens = split_list(pending.h0_values);
    if (static_cast<int>(tokens.size()) != d * d) {
      bad("model.h0.values", pending.h0_values, "need d_sys^2 row-major entries");
    }
    Matrix h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) h(i, j) = parse_complex("model.h0.values", tokens[i * d + j]);
    c.model.h0 = SystemHamiltonian::explicit_(std::move(h));
  }

  const auto psi_tokens = split_list(pending.psi0);
  if (!psi_tokens.empty()) {
    if (static_cast<int>(psi_tokens.size()) != d) bad("model.psi0", pending.psi0, "need d_sys amplitudes");
    Vector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = parse_complex("model.psi0", psi_tokens[i]);
    if (!(psi.norm() > 0.0)) bad("model.psi0", pending.psi0, "state must be non-zero");
    c.model.initial_state = psi;
  }

  try {
    c.model.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }

  if (!pending.t_final_set) c.t_final = c.model.total_time();
  if (!pending.window_set) {
    c.window_steps = std::max(1, static_cast<int>(std::lround(5.0 / (c.model.gamma1 * c.model.dt))));
  }
  if (!pending.jump_set) c.jump_step = std::max(1, c.model.n_steps / 2);
  if (!pending.persistence_set) c.persistence_steps = c.window_steps;
  return c;
}

FlatConfig to_flat_config(const RunConfig& c) {
  FlatConfig f;
  const ModelParams& m = c.model;
  f["model.kappa"] = format_double(m.kappa);
  f["model.gamma1"] = format_double(m.gamma1);
  f["model.gamma2"] = format_double(m.gamma2);
  f["model.d_sys"] = std::to_string(m.d_sys);
  f["model.dt"] = format_double(m.dt);
  f["model.n_steps"] = std::to_string(m.n_steps);
  switch (m.h0.kind) {
    case SystemHamiltonian::Kind::Zero:
      f["model.h0"] = "zero";
      f["model.h0.values"] = "";
      break;
    case SystemHamiltonian::Kind::Diagonal: {
      f["model.h0"] = "diagonal";
      std::vector<std::string> items;
      for (double x : m.h0.frequencies) items.push_back(format_double(x));
      f["model.h0.values"] = join(items);
      break;
    }
    case SystemHamiltonian::Kind::Explicit: {
      f["model.h0"] = "matrix";
      std::vector<std::string> items;
      for (Index i = 0; i < m.h0.explicit_matrix.rows(); ++i)
        for (Index j = 0; j < m.h0.explicit_matrix.cols(); ++j)
          items.push_back(render_complex(m.h0.explicit_matrix(i, j)));
      f["model.h0.values"] = join(items);
      break;
    }
  }
  {
    const Vector psi = m.initial_state.size() ? m.initial_state : m.psi0();
    std::vector<std::string> items;
    for (Index i = 0; i < psi.size(); ++i) items.push_back(render_complex(psi(i)));
    f["model.psi0"] = join(items);
  }
  f["run.seed"] = std::to_string(c.seed);
  f["run.out"] = c.out_root;
  f["run.t_final"] = format_double(c.t_final);
  f["trajectories.count"] = std::to_string(c.traj_count);
  f["trajectories.checkpoints"] = std::to_string(c.checkpoints);
  f["trajectories.max_step_probability"] = format_double(c.max_step_probability);
  f["histories.n_cap"] = std::to_string(c.n_cap);
  f["histories.convention"] =
      c.convention == ProjectionConvention::Literal ? "literal" : "project_after_step";
  f["histories.epsilon"] = format_double(c.epsilon);
  f["histories.probability_floor"] = format_double(c.probability_floor);
  f["analysis.band_constant"] = format_double(c.band_constant);
  f["analysis.window_steps"] = std::to_string(c.window_steps);
  f["analysis.jump_step"] = std::to_string(c.jump_step);
  f["analysis.persistence_steps"] = std::to_string(c.persistence_steps);
  f["analysis.adiabatic_samples"] = std::to_string(c.adiabatic_samples);
  f["scaling.parameter"] = c.sweep_parameter == SweepParameter::Gamma2 ? "gamma2" : "dt";
  {
    std::vector<std::string> items;
    for (double x : c.sweep) items.push_back(format_double(x));
    f["scaling.sweep"] = join(items);
  }
  f["scaling.pair"] =
      c.scaling_pair == ScalingPair::LeadingEdge ? "leading_edge" : "no_photon_midpoint";
  f["scaling.slope_target"] = format_double(c.slope_target);
  f["scaling.slope_tolerance"] = format_double(c.slope_tolerance);
  return f;
}

}  // namespace qjh
