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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qjh/config.hpp"

namespace qjh {

inline constexpr const char* kOutputRootEnv = "QJH_OUTPUT_ROOT";

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitConfig = 2,
};

/// run.out if set, else $QJH_OUTPUT_ROOT, else ./qjh-runs.
std::filesystem::path resolve_output_root(const RunConfig& cfg);

/// Creates <root>/<command>-<UTC yyyymmddThhmmssZ>-<n> with the smallest n
/// not already taken. Never returns an existing directory.
std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& command);

struct CommandResult {
  int exit_code = kExitPass;
  std::filesystem::path run_dir;  // empty when the config was rejected
};

/// Resolves `flat`, creates the run directory, writes manifest.cfg and
/// manifest.json, runs `command` and maps errors to exit codes. A short
/// summary goes to `out`, diagnostics to `err`.
CommandResult run_command(const std::string& command, const FlatConfig& flat, std::ostream& out,
                          std::ostream& err);

/// Commands understood by run_command.
const std::vector<std::string>& command_names();

}  // namespace qjh
