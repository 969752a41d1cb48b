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

// qmetric command-line front end. Talks to the library through the C API only.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qmetric/qmetric.h"

namespace {

struct RunHandle {
  qm_run* run = nullptr;
  ~RunHandle() { qm_run_destroy(run); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmetric: quantum metrics on group C*-algebras, by experiment"};
  app.set_version_flag("--version", std::string(qm_version()));
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> ball_cap;
  std::optional<int> threads;

  const char* commands[][2] = {
      {"growth", "ball sizes, doubling ratios and growth verdicts"},
      {"seminorm", "exact J_D and the L_D bracket for given elements"},
      {"decompose", "sharp/flat split at scale N with its certificates"},
      {"verify", "check every inequality record on a corpus"},
      {"metric", "lower bounds for the state-space metric"},
      {"covering-demo", "finite-sample total boundedness illustration"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (created if missing)");
    sub->add_option("--seed", seed, "corpus seed, overrides the config");
    sub->add_option("--ball-cap", ball_cap, "largest ball to materialize")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return QM_EXIT_USAGE;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunHandle h;
  if (qm_run_create(command.c_str(), config.c_str(), &h.run) != QM_OK ||
      qm_run_set_out_dir(h.run, out_dir.c_str()) != QM_OK || (seed && qm_run_set_seed(h.run, *seed) != QM_OK) ||
      (ball_cap && qm_run_set_ball_cap(h.run, *ball_cap) != QM_OK) ||
      (threads && qm_run_set_threads(h.run, *threads) != QM_OK)) {
    std::fprintf(stderr, "qmetric: %s\n", qm_last_error());
    return QM_EXIT_USAGE;
  }
  int code = QM_EXIT_USAGE;
  if (qm_run_execute(h.run, &code) != QM_OK) {
    std::fprintf(stderr, "qmetric: %s\n", qm_last_error());
    return QM_EXIT_USAGE;
  }
  std::fprintf(code == QM_EXIT_OK ? stdout : stderr, "qmetric %s: %s\n", command.c_str(), qm_run_message(h.run));
  for (size_t i = 0; i < qm_run_citation_count(h.run); ++i) {
    std::fprintf(stderr, "  violated: %s\n", qm_run_citation(h.run, i));
  }
  return code;
}
