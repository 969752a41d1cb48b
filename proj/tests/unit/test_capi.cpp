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

#include <cmath>
#include <filesystem>
#include <string>

#include "qmetric/qmetric.h"

TEST_SUITE("capi") {

TEST_CASE("version and lengths") {
  CHECK(std::string(qm_version()) == "1.0.0");
  qm_length* L = nullptr;
  REQUIRE(qm_length_create(R"({"family":"free-abelian","rank":2})", nullptr, &L) == QM_OK);
  const int64_t x[] = {2, -3};
  double len = 0;
  CHECK(qm_length_of(L, x, 2, &len) == QM_OK);
  CHECK(len == 5.0);
  uint64_t n = 0;
  CHECK(qm_ball_size(L, 2, &n) == QM_OK);
  CHECK(n == 13);
  const int64_t bad[] = {1};
  CHECK(qm_length_of(L, bad, 1, &len) == QM_ERR_USAGE);
  CHECK(std::string(qm_last_error()).size() > 0);
  qm_length_destroy(L);
  REQUIRE(qm_length_create(R"({"family":"heisenberg"})", nullptr, &L) == QM_OK);
  CHECK(qm_length_set_ball_cap(L, 10) == QM_OK);
  CHECK(qm_ball_size(L, 5, &n) == QM_ERR_CAP);
  qm_length_destroy(L);
}

TEST_CASE("bad arguments are reported, not thrown") {
  qm_length* L = nullptr;
  CHECK(qm_length_create(R"({"family":"free-abelian","rank":"2"})", nullptr, &L) == QM_ERR_USAGE);
  CHECK(L == nullptr);
  CHECK(qm_length_create(nullptr, nullptr, &L) == QM_ERR_USAGE);
  CHECK(qm_length_create("{", nullptr, &L) == QM_ERR_USAGE);
}

TEST_CASE("seminorms through handles") {
  qm_length* L = nullptr;
  REQUIRE(qm_length_create(R"({"family":"free-abelian","rank":1})", R"({"kind":"word"})", &L) == QM_OK);
  qm_element* f = nullptr;
  REQUIRE(qm_element_create(L, &f) == QM_OK);
  const int64_t one[] = {1};
  const int64_t minus[] = {-1};
  CHECK(qm_element_add(f, one, 1, 1.0, 0.0) == QM_OK);
  double j = 0;
  CHECK(qm_jd(f, &j) == QM_OK);
  CHECK(std::abs(j - 0.5) <= 1e-12);
  double lo = 0, hi = 0;
  CHECK(qm_ld_bracket(f, 4, &lo, &hi) == QM_OK);
  CHECK(std::abs(lo - 1.0) <= 1e-9);
  CHECK(hi == 1.0);
  CHECK(qm_element_add(f, minus, 1, 1.0, 0.0) == QM_OK);
  CHECK(qm_jd(f, &j) == QM_OK);
  CHECK(std::abs(j - std::sqrt(0.5)) <= 1e-12);
  size_t n = 0;
  CHECK(qm_element_support_size(f, &n) == QM_OK);
  CHECK(n == 2);
  double w = 0;
  CHECK(qm_weighted_l1(f, &w) == QM_OK);
  CHECK(w == 2.0);
  qm_element_destroy(f);
  qm_length_destroy(L);
}

TEST_CASE("runs through handles") {
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "qmetric_unit_capi_run";
  std::filesystem::remove_all(out);
  qm_run* run = nullptr;
  REQUIRE(qm_run_create("growth", QMETRIC_SOURCE_DIR "/configs/growth_z2.json", &run) == QM_OK);
  CHECK(qm_run_set_out_dir(run, out.string().c_str()) == QM_OK);
  CHECK(qm_run_set_threads(run, 0) == QM_ERR_USAGE);
  int code = -1;
  CHECK(qm_run_execute(run, &code) == QM_OK);
  CHECK(code == QM_EXIT_OK);
  CHECK(qm_run_citation_count(run) == 0);
  CHECK(std::string(qm_run_report(run)).find("\"exit_code\": 0") != std::string::npos);
  CHECK(std::filesystem::exists(out / "growth.csv"));
  qm_run_destroy(run);

  REQUIRE(qm_run_create("growth", "/nonexistent/config.json", &run) == QM_OK);
  CHECK(qm_run_execute(run, &code) == QM_OK);
  CHECK(code == QM_EXIT_USAGE);
  CHECK(std::string(qm_run_message(run)).size() > 0);
  qm_run_destroy(run);
  std::filesystem::remove_all(out);
}

}  // TEST_SUITE
