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

#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/state_metric.hpp"

using namespace qmetric;

namespace {

const LengthFunction& Z() {
  static const LengthFunction L = LengthFunction::word(Group::free_abelian(1));
  return L;
}

State half_shift() {
  AlgebraElement xi = AlgebraElement::delta({0}, std::sqrt(0.5));
  xi.add({1}, std::sqrt(0.5));
  return State::vector(xi, "half-shift");
}

}  // namespace

TEST_SUITE("state-metric") {

TEST_CASE("state evaluation") {
  const Group& G = Z().group();
  AlgebraElement f = AlgebraElement::delta({0}, 3.0);
  f.add({1}, 1.0);
  CHECK(state_eval(G, State::trace(), f) == Complex(3));
  CHECK(std::abs(state_atom(G, half_shift(), {1}) - 0.5) <= 1e-15);
  CHECK(std::abs(state_atom(G, half_shift(), {-1}) - 0.5) <= 1e-15);
  CHECK(std::abs(state_atom(G, half_shift(), {0}) - 1.0) <= 1e-15);
  const State point = State::vector(AlgebraElement::delta({4}));
  for (int s = -3; s <= 3; ++s) CHECK(state_atom(G, point, {s}) == Complex(s == 0 ? 1.0 : 0.0));
  const State mix = State::mixture({0.25, 0.75}, {State::trace(), half_shift()});
  CHECK(std::abs(state_atom(G, mix, {1}) - 0.375) <= 1e-15);
  CHECK(std::abs(state_atom(G, mix, {0}) - 1.0) <= 1e-15);
}

TEST_CASE("state construction is validated") {
  CHECK_THROWS_AS(State::vector(AlgebraElement::delta({0}, 2.0)), UsageError);
  CHECK_THROWS_AS(State::mixture({0.5, 0.6}, {State::trace(), State::trace()}), UsageError);
  CHECK_THROWS_AS(State::mixture({-0.5, 1.5}, {State::trace(), State::trace()}), UsageError);
}

TEST_CASE("atom bound") {
  const MetricBound b = atom_metric_lower_bound(Z(), half_shift(), State::trace(), 3);
  CHECK(std::abs(b.value - 0.5) <= 1e-15);
  CHECK(std::abs(Z().length(b.witness)) == 1.0);
  CHECK(atom_metric_lower_bound(Z(), half_shift(), half_shift(), 3).value == 0.0);
  CHECK(atom_metric_lower_bound(Z(), State::vector(AlgebraElement::delta({2})), State::trace(), 3).value == 0.0);
  const FeasibilityAudit a = audit_feasibility(Z(), b);
  CHECK(a.ok);
}

TEST_CASE("atom bound scales with the length") {
  const LengthFunction half = LengthFunction::word(Group::free_abelian(1), 0.5);
  const double base = atom_metric_lower_bound(Z(), half_shift(), State::trace(), 3).value;
  const double scaled = atom_metric_lower_bound(half, half_shift(), State::trace(), 1.5).value;
  CHECK(scaled == 2.0 * base);
}

TEST_CASE("ascent starts from the atom bound and stays feasible") {
  for (MetricConstraint c : {MetricConstraint::l1, MetricConstraint::jd}) {
    CAPTURE(to_string(c));
    const MetricBound b = metric_ascent(Z(), half_shift(), State::trace(), 2, c);
    CHECK(b.value >= 0.5 - 1e-15);
    CHECK(audit_feasibility(Z(), b).ok);
    for (std::size_t i = 1; i < b.trace.size(); ++i) CHECK(b.trace[i] >= b.trace[i - 1]);
  }
  const MetricBound same = metric_ascent(Z(), half_shift(), half_shift(), 2, MetricConstraint::jd);
  CHECK(same.value == 0.0);
}

TEST_CASE("ascent is symmetric, monotone in radius, and ordered by constraint") {
  CorpusRng rng(21);
  for (int k = 0; k < 4; ++k) {
    const State mu = State::vector(random_unit_vector(Z(), 2, 2, rng));
    const State nu = State::vector(random_unit_vector(Z(), 2, 2, rng));
    const MetricBound ab = metric_ascent(Z(), mu, nu, 2, MetricConstraint::l1);
    const MetricBound ba = metric_ascent(Z(), nu, mu, 2, MetricConstraint::l1);
    CHECK(std::abs(ab.value - ba.value) <= 1e-9);
    const MetricBound wide = metric_ascent(Z(), mu, nu, 4, MetricConstraint::l1);
    CHECK(ab.value <= wide.value + 1e-9);
    const MetricBound jd = metric_ascent(Z(), mu, nu, 2, MetricConstraint::jd);
    CHECK(jd.value >= ab.value - 1e-9);
    CHECK(audit_feasibility(Z(), jd).ok);
  }
}

TEST_CASE("group l1 projection") {
  Eigen::VectorXd y(4);
  y << 3, 4, 0.1, 0;
  const Eigen::VectorXd x = project_group_l1(y, {1.0, 2.0}, {2, 2});
  const double cost = x.head(2).norm() + 2.0 * x.tail(2).norm();
  CHECK(cost == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::VectorXd inside(2);
  inside << 0.1, 0.2;
  CHECK(project_group_l1(inside, {1.0, 1.0}, {1, 1}) == inside);
}

}  // TEST_SUITE
