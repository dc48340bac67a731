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

#include "qjh/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qjh/analysis.hpp"
#include "qjh/histories.hpp"
#include "qjh/io.hpp"
#include "qjh/trajectories.hpp"

namespace qjh {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_output_root(const RunConfig& cfg) {
  if (!cfg.out_root.empty()) return cfg.out_root;
  if (const char* env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0') return env;
  return fs::path("qjh-runs");
}

namespace {

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

fs::path make_run_dir(const fs::path& root, const std::string& command) {
  fs::create_directories(root);
  const std::string stem = command + "-" + utc_stamp() + "-";
  for (int n = 1;; ++n) {
    const fs::path dir = root / (stem + std::to_string(n));
    // create_directory reports false when the path exists, which makes the
    // claim atomic with respect to concurrent runs.
    if (fs::create_directory(dir)) return dir;
  }
}

namespace {

struct Context {
  const RunConfig& cfg;
  const fs::path& dir;
  std::ostream& out;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  fn(f);
}

std::string bits(std::uint64_t index, int n) {
  std::string s;
  for (auto b : history_from_index(index, n)) s += static_cast<char>('0' + b);
  return s;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int run_histories(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const DecoherenceOptions opts{c.n_cap, c.convention};
  const DecoherenceMatrix d = full_decoherence_matrix(c.model, opts);
  const InvariantSummary inv = d.invariants();
  const DecoherenceReport rep = decoherence_report(d, c.epsilon, c.probability_floor);
  const CoarseGrainResult coarse = coarse_grain_absorption(d, c.window_steps);

  write_json(ctx.dir / "decoherence_matrix.json", to_json(d));
  json summary;
  summary["invariants"] = to_json(inv);
  summary["report"] = to_json(rep, d.n_steps);
  summary["coarse_grain"] = to_json(coarse);
  summary["pass"] = inv.ok();
  write_json(ctx.dir / "histories.json", summary);

  std::ostringstream s;
  s << std::setprecision(17);
  s << "histories N=" << d.n_steps << " convention="
    << (d.convention == ProjectionConvention::Literal ? "literal" : "project_after_step") << "\n";
  s << "sum_h p(h)            = " << inv.diagonal_sum << "\n";
  s << "sum_hh' D[h,h']       = " << inv.grand_sum.real() << " + " << inv.grand_sum.imag() << "i\n";
  s << "hermiticity error     = " << inv.hermiticity_error << "\n";
  s << "min p(h)              = " << inv.min_diagonal << "\n";
  s << "attained epsilon      = " << rep.attained_epsilon << "\n";
  s << "worst pair            = " << bits(rep.worst_pair.h, d.n_steps) << " / "
    << bits(rep.worst_pair.hp, d.n_steps) << "\n";
  s << "pairs above epsilon   = " << rep.violating_count << " (epsilon " << rep.epsilon << ")\n";
  s << "coarse no-photon      = " << coarse.no_photon() << "\n";
  s << "coarse leakage        = " << coarse.leakage << " (window " << coarse.window_steps << " steps)\n";
  const std::vector<double> probs = d.probabilities();
  const std::size_t listed = std::min<std::size_t>(probs.size(), 16);
  for (std::size_t i = 0; i < listed; ++i) {
    s << "p(" << bits(i, d.n_steps) << ") = " << probs[i] << "\n";
  }
  if (listed < probs.size()) s << "... " << probs.size() - listed << " more in decoherence_matrix.json\n";
  s << "invariants: " << verdict(inv.ok()) << "\n";
  write_text(ctx.dir / "summary.txt", s.str());
  ctx.out << s.str();
  return inv.ok() ? kExitPass : kExitFail;
}

int run_trajectories(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.traj_count < 1) throw ConfigError("trajectories.count: must be >= 1");
  const int steps = steps_for_horizon(c.model, c.t_final);
  if (steps < 1) throw ConfigError("run.t_final: must cover at least one step");
  const std::vector<int> checkpoints = even_checkpoints(steps, c.checkpoints);
  const TrajectorySampler sampler(c.model, c.t_final, checkpoints, c.max_step_probability);
  const std::vector<TrajectoryRecord> records = sample_ensemble(sampler, c.seed, c.traj_count);

  write_with(ctx.dir / "records.txt", [&](std::ostream& f) { write_records(f, records); });

  double jumps = 0.0;
  std::size_t zero_jump = 0;
  for (const auto& r : records) {
    jumps += static_cast<double>(r.jump_steps.size());
    if (r.jump_steps.empty()) ++zero_jump;
  }
  const Matrix avg = ensemble_average(records);
  json rho = json::array();
  for (Index i = 0; i < avg.rows(); ++i)
    for (Index k = 0; k < avg.cols(); ++k) rho.push_back({avg(i, k).real(), avg(i, k).imag()});

  json summary;
  summary["count"] = c.traj_count;
  summary["steps"] = steps;
  summary["horizon"] = c.t_final;
  summary["mean_jumps"] = jumps / static_cast<double>(records.size());
  summary["zero_jump_fraction"] = static_cast<double>(zero_jump) / static_cast<double>(records.size());
  summary["final_average_state"] = rho;
  summary["checkpoint_steps"] = checkpoints;

  bool pass = true;
  std::ostringstream s;
  s << std::setprecision(17);
  s << "trajectories M=" << c.traj_count << " steps=" << steps << " seed=" << c.seed << "\n";
  s << "mean jumps          = " << jumps / static_cast<double>(records.size()) << "\n";
  s << "zero-jump records   = " << zero_jump << "\n";
  if (c.traj_count >= 100) {
    const SeriesReport consistency = ensemble_consistency(c.model, records, checkpoints, c.t_final);
    summary["consistency"] = to_json(consistency);
    write_with(ctx.dir / "consistency.csv", [&](std::ostream& f) { write_series_csv(f, consistency); });
    pass = consistency.all_pass();
    for (const auto& row : consistency.rows) {
      s << "t=" << row.parameter << " trace distance " << row.measured << " band " << row.band << " "
        << verdict(row.pass) << "\n";
    }
  } else {
    s << "consistency check skipped (needs at least 100 trajectories)\n";
  }
  summary["pass"] = pass;
  write_json(ctx.dir / "ensemble.json", summary);
  ctx.out << s.str();
  return pass ? kExitPass : kExitFail;
}

void print_comparison(std::ostream& s, const ComparisonReport& r) {
  for (const auto& e : r.entries) {
    s << r.name << " " << e.label << " @" << e.parameter << ": measured " << e.measured << " reference "
      << e.reference << " rel.err " << e.relative_error << " band " << e.band << " "
      << (e.asserted ? verdict(e.pass) : "info") << "\n";
  }
}

int run_compare(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const BandConfig band{c.band_constant};
  std::vector<ComparisonReport> reports;
  reports.push_back(compare_no_jump(c.model, band));
  reports.push_back(compare_one_jump(c.model, c.jump_step, c.window_steps, band));

  json j;
  if (c.model.kappa > 0.0) {
    reports.push_back(compare_post_jump_persistence(c.model, c.jump_step, c.persistence_steps, band));
  } else {
    j["notes"].push_back("post_jump_persistence skipped: no photon can be registered with kappa = 0");
  }

  bool pass = true;
  j["reports"] = json::array();
  for (const auto& r : reports) {
    j["reports"].push_back(to_json(r));
    pass = pass && r.all_pass();
  }
  j["pass"] = pass;
  write_json(ctx.dir / "compare.json", j);
  write_with(ctx.dir / "compare.csv", [&](std::ostream& f) {
    f << "report,";
    bool header = true;
    for (const auto& r : reports) {
      std::ostringstream body;
      write_comparison_csv(body, r);
      std::string line;
      std::istringstream lines(body.str());
      std::getline(lines, line);
      if (header) f << line << '\n';
      header = false;
      while (std::getline(lines, line)) f << r.name << ',' << line << '\n';
    }
  });

  std::ostringstream s;
  s << std::setprecision(17);
  for (const auto& r : reports) print_comparison(s, r);
  s << "compare: " << verdict(pass) << "\n";
  ctx.out << s.str();
  return pass ? kExitPass : kExitFail;
}

int run_scaling(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.sweep.empty()) throw ConfigError("scaling.sweep: required by the scaling command");
  const ScalingFit fit = decoherence_scaling(c.model, c.sweep_parameter, c.sweep, c.scaling_pair);
  const bool pass = std::abs(fit.slope - c.slope_target) <= c.slope_tolerance;

  json j;
  j["fit"] = to_json(fit);
  j["slope_target"] = c.slope_target;
  j["slope_tolerance"] = c.slope_tolerance;
  j["pass"] = pass;
  const ScalingPair other =
      c.scaling_pair == ScalingPair::LeadingEdge ? ScalingPair::NoPhotonMidpoint : ScalingPair::LeadingEdge;
  try {
    j["other_pair"] = to_json(decoherence_scaling(c.model, c.sweep_parameter, c.sweep, other));
  } catch (const DegenerateInputError& e) {
    j["other_pair"] = {{"error", e.what()}};
  }
  write_json(ctx.dir / "scaling.json", j);
  write_with(ctx.dir / "scaling.csv", [&](std::ostream& f) { write_scaling_csv(f, fit); });

  std::ostringstream s;
  s << std::setprecision(17);
  for (const auto& p : fit.points) {
    s << "value " << p.value << " G*dt " << p.g_dt << " ratio " << p.ratio << "\n";
  }
  s << "slope " << fit.slope << " (target " << c.slope_target << " +/- " << c.slope_tolerance << ") "
    << verdict(pass) << "\n";
  ctx.out << s.str();
  return pass ? kExitPass : kExitFail;
}

int run_validate(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const BandConfig band{c.band_constant};
  const SeriesReport adiabatic = adiabatic_validity(c.model, c.t_final, band, c.adiabatic_samples);
  json j;
  j["adiabatic"] = to_json(adiabatic);
  write_with(ctx.dir / "adiabatic.csv", [&](std::ostream& f) { write_series_csv(f, adiabatic); });
  bool pass = adiabatic.all_pass();

  std::ostringstream s;
  s << std::setprecision(17);
  for (const auto& r : adiabatic.rows) {
    s << "adiabatic @" << r.parameter << ": " << r.measured << " band " << r.band << " "
      << (r.asserted ? verdict(r.pass) : "info") << "\n";
  }
  if (c.traj_count >= 100) {
    const SeriesReport unravel =
        unraveling_consistency(c.model, c.traj_count, c.t_final, c.seed, c.checkpoints);
    j["unraveling"] = to_json(unravel);
    write_with(ctx.dir / "unraveling.csv", [&](std::ostream& f) { write_series_csv(f, unravel); });
    pass = pass && unravel.all_pass();
    for (const auto& r : unravel.rows) {
      s << "unraveling @" << r.parameter << ": " << r.measured << " band " << r.band << " "
        << verdict(r.pass) << "\n";
    }
  } else {
    s << "unraveling check skipped (needs at least 100 trajectories)\n";
  }
  j["pass"] = pass;
  write_json(ctx.dir / "validate.json", j);
  s << "validate: " << verdict(pass) << "\n";
  ctx.out << s.str();
  return pass ? kExitPass : kExitFail;
}

using Handler = int (*)(const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"histories", run_histories}, {"trajectories", run_trajectories}, {"compare", run_compare},
      {"scaling", run_scaling},     {"validate", run_validate},
  };
  return table;
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg) {
  const FlatConfig flat = to_flat_config(cfg);
  write_text(dir / "manifest.cfg",
             "# qjh " + command + " run, resolved configuration\n" + render_flat_config(flat));
  json j;
  j["command"] = command;
  j["created_utc"] = utc_stamp();
  j["config"] = flat;
  write_json(dir / "manifest.json", j);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : handlers()) v.push_back(name);
    return v;
  }();
  return names;
}

CommandResult run_command(const std::string& command, const FlatConfig& flat, std::ostream& out,
                          std::ostream& err) {
  CommandResult result;
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    err << "error: unknown command '" << command << "'\n";
    result.exit_code = kExitConfig;
    return result;
  }
  RunConfig cfg;
  try {
    cfg = resolve_config(flat);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    result.exit_code = kExitConfig;
    return result;
  }

  try {
    result.run_dir = make_run_dir(resolve_output_root(cfg), command);
    write_manifest(result.run_dir, command, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = kExitConfig;
    return result;
  }

  const auto fail = [&](int code, const char* kind, const std::exception& e) {
    err << kind << ": " << e.what() << "\n";
    write_text(result.run_dir / "error.txt", std::string(kind) + ": " + e.what() + "\n");
    result.exit_code = code;
  };
  try {
    const Context ctx{cfg, result.run_dir, out};
    result.exit_code = it->second(ctx);
  } catch (const ConfigError& e) {
    fail(kExitConfig, "config error", e);
  } catch (const PreconditionError& e) {
    fail(kExitConfig, "precondition error", e);
  } catch (const DimensionError& e) {
    fail(kExitConfig, "dimension error", e);
  } catch (const OverExcitationError& e) {
    fail(kExitFail, "over-excitation", e);
  } catch (const DegenerateInputError& e) {
    fail(kExitFail, "degenerate input", e);
  } catch (const std::exception& e) {
    fail(kExitFail, "error", e);
  }
  out << "run directory: " << result.run_dir.string() << "\n";
  return result;
}

}  // namespace qjh
