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

// qjh: command-line driver. Every subcommand accepts the same flags; flags
// override values from --config, --set overrides both.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qjh/commands.hpp"
#include "qjh/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> n_steps;
  std::optional<std::string> traj_count;
  std::optional<std::string> sweep;
  std::optional<std::string> window_steps;
  std::optional<std::string> band_constant;
  std::optional<std::string> t_final;
  std::vector<std::string> set;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "flat key = value configuration file");
  cmd->add_option("--seed", f.seed, "base seed (run.seed)");
  cmd->add_option("--out", f.out, "output root directory (run.out)");
  cmd->add_option("--n-steps", f.n_steps, "model.n_steps");
  cmd->add_option("--traj-count", f.traj_count, "trajectories.count");
  cmd->add_option("--sweep", f.sweep, "scaling.sweep, e.g. \"100,300,1000,3000\"");
  cmd->add_option("--window-steps", f.window_steps, "analysis.window_steps");
  cmd->add_option("--band-constant", f.band_constant, "analysis.band_constant");
  cmd->add_option("--t-final", f.t_final, "run.t_final");
  cmd->add_option("--set", f.set, "any key=value override (repeatable)");
}

qjh::FlatConfig overrides(const Flags& f) {
  qjh::FlatConfig o;
  const auto put = [&o](const char* key, const std::optional<std::string>& v) {
    if (v) o[key] = *v;
  };
  put("run.seed", f.seed);
  put("run.out", f.out);
  put("model.n_steps", f.n_steps);
  put("trajectories.count", f.traj_count);
  put("scaling.sweep", f.sweep);
  put("analysis.window_steps", f.window_steps);
  put("analysis.band_constant", f.band_constant);
  put("run.t_final", f.t_final);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw qjh::ConfigError("--set: expected key=value, got '" + kv + "'");
    }
    o[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qjh: photodetection histories and quantum-jump trajectories"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const auto& name : qjh::command_names()) {
    CLI::App* cmd = app.add_subcommand(name);
    add_flags(cmd, flags);
    cmd->callback([&chosen, name] { chosen = name; });
  }
  CLI::App* keys = app.add_subcommand("keys", "list configuration keys");
  keys->callback([&chosen] { chosen = "keys"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qjh::kExitPass : qjh::kExitConfig;
  }

  if (chosen == "keys") {
    for (const auto& [key, doc] : qjh::config_keys()) std::cout << key << "\t" << doc << "\n";
    return qjh::kExitPass;
  }

  qjh::FlatConfig flat;
  try {
    if (!flags.config.empty()) flat = qjh::load_flat_config(flags.config);
    flat = qjh::merge(std::move(flat), overrides(flags));
  } catch (const qjh::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qjh::kExitConfig;
  }
  return qjh::run_command(chosen, flat, std::cout, std::cerr).exit_code;
}
