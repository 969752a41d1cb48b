// Copyright 2026 The qmetric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRIC_APP_EXPERIMENT_HPP
#define QMETRIC_APP_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "app/config.hpp"

namespace qmetric {

enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitRigorous = 2, kExitInconclusive = 3 };

struct RunRequest {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> ball_cap;
  std::optional<int> threads;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;                 // one line; names citations on status 2
  std::vector<std::string> citations;  // anchors of failed rigorous records
  std::string report;                  // report.json as written
  std::vector<std::string> files;      // paths written, report last
};

// Reads the config file and runs. Never throws: usage problems map to exit 1
// and leave the output directory untouched.
RunOutcome run_experiment(const RunRequest& request);

// Same, with the config text supplied directly (config_path is ignored).
RunOutcome run_experiment_text(const RunRequest& request, const std::string& config_text);

// report.json with the wall-clock field removed, for determinism checks.
std::string payload_fingerprint(const std::string& report);

}  // namespace qmetric

#endif  // QMETRIC_APP_EXPERIMENT_HPP
