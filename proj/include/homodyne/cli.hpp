// Copyright 2026 The Homodyne Noise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every command resolves its configuration (config
// file, then flags, then defaults), echoes the resolved configuration with
// its results, and maps library errors onto exit codes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "homodyne/errors.hpp"
#include "json.hpp"

namespace homodyne::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitCapability = 3,
    kExitRange = 4,
    kExitIo = 5,
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
    std::string command;               ///< simulate | estimate | compare | sweep
    nlohmann::json state;              ///< StateSpec JSON
    nlohmann::json observable;         ///< Observable JSON
    std::vector<nlohmann::json> observables;  ///< sweep
    double eta = 1.0;
    std::uint64_t n = 10000;
    std::uint64_t seed = 0;
    std::string output_path;           ///< empty: stdout
    std::string data_path;             ///< estimate input
    std::string detector = "homodyne"; ///< simulate: homodyne | fixed_phase | photocount | heterodyne
    double phi = 0.0;                  ///< fixed_phase detector
    std::string mode = "analytic";     ///< compare / sweep: analytic | empirical
    std::vector<double> nbar_grid;
    std::vector<double> eta_list;
    std::size_t bins = 0;              ///< estimate: phase histogram bins (0 = none)
};

/// Resolved configuration with every default filled in.
nlohmann::json to_json(const RunConfig& config);

/// Validates a config document against the schema and fills defaults.
RunConfig config_from_json(const nlohmann::json& j);

/// Executes a resolved config; returns results as JSON (also written to
/// config.output_path or `out`). CSV-producing commands write CSV instead.
void execute(const RunConfig& config, std::ostream& out);

/// Full CLI entry point. Returns the process exit code; on failure prints one
/// line "error kind=<kind> exit=<code> message=<text>" to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homodyne::cli
