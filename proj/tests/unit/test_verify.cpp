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

#include <set>

#include "core/corpus.hpp"
#include "core/verify.hpp"

using namespace qmetric;

namespace {

const LengthFunction& Z() {
  static const LengthFunction L = LengthFunction::word(Group::free_abelian(1));
  return L;
}

const ScaleFamily& ZFamily() {
  static const ScaleFamily fam = build_scale_family(Z(), 2, 6, 7.0 / 3.0, true);
  return fam;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("record certificates decide rigor") {
  CHECK(compare("a", "x", 1, Side::lower_bound, 2, Side::upper_bound).rigorous);
  CHECK(compare("a", "x", 1, Side::exact, 2, Side::exact).rigorous);
  CHECK_FALSE(compare("a", "x", 1, Side::upper_bound, 2, Side::exact).rigorous);
  CHECK_FALSE(compare("a", "x", 1, Side::lower_bound, 2, Side::lower_bound).rigorous);
  CHECK_FALSE(compare("a", "x", 1, Side::stabilized, 2, Side::exact).rigorous);
}

TEST_CASE("record status and tolerance") {
  CHECK(compare("a", "x", 1.0, Side::exact, 1.0, Side::exact).status == RecordStatus::pass);
  CHECK(compare("a", "x", 1.0 + 5e-10, Side::exact, 1.0, Side::exact).status == RecordStatus::pass);
  CHECK(compare("a", "x", 1.0 + 5e-9, Side::exact, 1.0, Side::exact).status == RecordStatus::fail);
  CHECK(compare("a", "x", 1.0, Side::exact, 1.0, Side::exact, {}, true).status == RecordStatus::fail);
  CHECK(compare("a", "x", std::nan(""), Side::exact, 1.0, Side::exact).status == RecordStatus::inconclusive);
  const InequalityRecord r = compare("a", "x", 0.25, Side::exact, 1.0, Side::exact);
  CHECK(r.margin == 0.75);
}

TEST_CASE("failed rigorous citations are reported once each") {
  InequalityReport rep;
  rep.records.push_back(compare("a", "bound", 2, Side::exact, 1, Side::exact));
  rep.records.push_back(compare("b", "weight", 2, Side::lower_bound, 1, Side::exact));
  rep.records.push_back(compare("c", "bound", 3, Side::exact, 1, Side::exact));
  rep.records.push_back(compare("d", "jip1", 3, Side::upper_bound, 1, Side::exact));
  CHECK(rep.rigorous_failures() == 3);
  CHECK(rep.failed_citations() == std::vector<std::string>{"bound", "weight"});
}

TEST_CASE("identity element passes every record trivially") {
  const InequalityReport rep = verify_inequalities(AlgebraElement::delta({0}), ZFamily(), 2);
  CHECK_FALSE(rep.records.empty());
  for (const auto& r : rep.records) {
    CAPTURE(r.name);
    if (r.strict) continue;  // J_D > 0 is only asked of elements with f(e) = 0
    CHECK(r.lhs == 0.0);
    CHECK(r.status == RecordStatus::pass);
  }
}

TEST_CASE("weight record for a shift") {
  const InequalityReport rep = verify_inequalities(AlgebraElement::delta({1}), ZFamily(), 2);
  bool seen = false;
  for (const auto& r : rep.records) {
    if (r.name != "weight") continue;
    CHECK(r.status == RecordStatus::pass);
    CHECK(r.rigorous);
    if (r.lhs == doctest::Approx(0.5) && r.rhs == 1.0) seen = true;
  }
  CHECK(seen);
}

TEST_CASE("Z corpus has no rigorous failures") {
  CorpusOptions opt;
  opt.size = 30;
  opt.support_radius = 30;
  std::set<std::string> names;
  for (const auto& f : random_corpus(Z(), opt, 7)) {
    const InequalityReport rep = verify_inequalities(f, ZFamily(), 2);
    CHECK(rep.rigorous_failures() == 0);
    CHECK(rep.count(RecordStatus::fail) == 0);
    for (const auto& r : rep.records) names.insert(r.name);
  }
  for (const char* n : {"jd-le-weighted-l1", "weight", "power-norm", "double", "jip2", "qcut", "sum", "econt", "flat-jd"}) {
    CHECK(names.count(n) == 1);
  }
}

TEST_CASE("truncation radius respects the element budget") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  const double rho = truncation_radius(Z2, 100, 400);
  CHECK(Z2.ball_count(rho) <= 400);
  CHECK(Z2.ball_count(rho + 1) > 400);
  CHECK(lambda_norm_lower(Z(), AlgebraElement::delta({3}, 2.0), 2) == doctest::Approx(2.0));
}

}  // TEST_SUITE
