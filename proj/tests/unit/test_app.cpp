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


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "app/config.hpp"
#include "app/experiment.hpp"
#include "app/io.hpp"
#include "core/errors.hpp"

using namespace qmetric;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qmetric_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOutcome run_text(const std::string& command, const std::string& text, const fs::path& out) {
  RunRequest req;
  req.command = command;
  req.out_dir = out.string();
  return run_experiment_text(req, text);
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("git blob hashing") {
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::sqrt(0.5)) == "0.7071067811865476");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv tables") {
  CsvTable t({"a", "b"});
  t.row().cell(1).cell(std::optional<double>());
  t.row().cell("x,y").cell(true);
  CHECK(t.rows() == 2);
  CHECK(t.str() == "a,b\n1,\n\"x,y\",true\n");
}

TEST_CASE("atomic writes replace the target") {
  const fs::path dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "f.txt", "one");
  write_atomic(dir / "f.txt", "two");
  CHECK(slurp(dir / "f.txt") == "two");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  CHECK(n == 1);
  fs::remove_all(dir);
}

TEST_CASE("config strictness") {
  CHECK_NOTHROW(parse_config(R"({"group":{"family":"free-abelian","rank":2}})"));
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"free-abelian","rank":"2"}})"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"free-abelian","rank":2},"sed":3})"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"free-abelian","rank":2},"seed":"3"})"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"free-abelian","rank":2.5}})"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"heisenberg","rank":2}})"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"seed":3})"), UsageError);
  CHECK_THROWS_AS(parse_config("{not json"), UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"heisenberg"},"decompose":{"N":2,"epsilon":0.5}})"),
                  UsageError);
  CHECK_THROWS_AS(parse_config(R"({"group":{"family":"heisenberg"},"growth":{"radii":[1,3,2]}})"), UsageError);
  try {
    parse_config(R"({"group":{"family":"free-abelian","rank":"2"}})");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }
}

TEST_CASE("config families and schedules") {
  const ExperimentConfig c = parse_config(
      R"({"group":{"family":"direct-sum","components":{"order":2,"count":5},"weights":"pow2-ksquared"},)"
      R"("growth":{"radii":{"from":1,"to":16,"factor":2}}})");
  REQUIRE(c.growth.has_value());
  CHECK(c.growth->radii == std::vector<double>{1, 2, 4, 8, 16});
  const LengthFunction L = make_length(c.group);
  CHECK(L.length({2, 1}) == 16.0);
  const ExperimentConfig h = parse_config(R"({"group":{"family":"heisenberg"},"length":{"kind":"word","scale":2}})");
  CHECK(make_length(h.group).length({0, 0, 1}) == 8.0);
}

TEST_CASE("growth run writes its tables") {
  const fs::path out = scratch("growth");
  const RunOutcome r =
      run_text("growth", R"({"group":{"family":"free-abelian","rank":2},"growth":{"radii":{"from":1,"to":32,"step":1}}})", out);
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out / "growth.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 33);
  const auto rep = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(rep["status"]["exit_code"] == 0);
  CHECK(rep["config_hash"].get<std::string>().size() == 40);
  bool strong = false;
  for (const auto& v : rep["payload"]["verdicts"]) {
    if (v["property"] == "strong-polynomial") strong = v["status"] == "consistent";
  }
  CHECK(strong);
  fs::remove_all(out);
}

TEST_CASE("usage errors leave no output") {
  const fs::path out = scratch("usage");
  CHECK(run_text("verify", R"({"command":"verify"})", out).exit_code == kExitUsage);
  CHECK(run_text("verify", R"({"group":{"family":"free-abelian","rank":"1"}})", out).exit_code == kExitUsage);
  CHECK(run_text("growth", R"({"group":{"family":"free-abelian","rank":1},"command":"verify"})", out).exit_code ==
        kExitUsage);
  CHECK(run_text("frobnicate", R"({"group":{"family":"free-abelian","rank":1}})", out).exit_code == kExitUsage);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("hitting the ball cap is inconclusive") {
  const fs::path out = scratch("cap");
  const RunOutcome r = run_text(
      "verify",
      R"({"group":{"family":"free-abelian","rank":2},"ball_cap":50,"verify":{"N":2,"corpus":{"size":3,"support_radius":3}}})",
      out);
  CHECK(r.exit_code == kExitInconclusive);
  CHECK(fs::exists(out / "report.json"));
  fs::remove_all(out);
}

TEST_CASE("identical seeds give identical payloads") {
  const std::string cfg =
      R"({"group":{"family":"heisenberg"},"seed":4,"verify":{"N":2,"corpus":{"size":6,"support_radius":3}}})";
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const RunOutcome ra = run_text("verify", cfg, a);
  RunRequest req;
  req.command = "verify";
  req.out_dir = b.string();
  req.threads = 3;
  const RunOutcome rb = run_experiment_text(req, cfg);
  CHECK(ra.exit_code == 0);
  auto ja = nlohmann::json::parse(payload_fingerprint(ra.report));
  auto jb = nlohmann::json::parse(payload_fingerprint(rb.report));
  CHECK(ja["payload"] == jb["payload"]);
  CHECK(slurp(a / "records.csv") == slurp(b / "records.csv"));
  const RunOutcome again = run_text("verify", cfg, a);
  CHECK(payload_fingerprint(again.report) == payload_fingerprint(ra.report));
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // TEST_SUITE
