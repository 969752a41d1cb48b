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

#include "core/errors.hpp"
#include "core/group.hpp"
#include "support.hpp"

using namespace qmetric;
using qmetric::testing::Rng;

TEST_SUITE("group") {

TEST_CASE("free abelian law") {
  const Group Z2 = Group::free_abelian(2);
  CHECK(Z2.compose({1, 2}, {3, -1}) == Element{4, 1});
  CHECK(Z2.inverse({3, -1}) == Element{-3, 1});
  CHECK(Z2.identity() == Element{0, 0});
  const auto gens = Z2.generators();
  CHECK(gens.size() == 4);
  for (const Element& g : {Element{1, 0}, Element{-1, 0}, Element{0, 1}, Element{0, -1}}) {
    CHECK(std::find(gens.begin(), gens.end(), g) != gens.end());
  }
}

TEST_CASE("heisenberg law") {
  const Group H = Group::heisenberg();
  CHECK(H.compose({1, 0, 0}, {0, 1, 0}) == Element{1, 1, 1});
  CHECK(H.compose({0, 1, 0}, {1, 0, 0}) == Element{1, 1, 0});
  CHECK(H.inverse({1, 1, 1}) == Element{-1, -1, 0});
  CHECK(H.identity() == Element{0, 0, 0});
  auto gens = H.generators();
  std::sort(gens.begin(), gens.end());
  std::vector<Element> want{{-1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {1, 0, 0}};
  std::sort(want.begin(), want.end());
  CHECK(gens == want);
}

TEST_CASE("cyclic generators") {
  const Group Z5 = Group::finite_product({5});
  auto gens = Z5.generators();
  std::sort(gens.begin(), gens.end());
  CHECK(gens == std::vector<Element>{{1}, {4}});
  CHECK(Z5.compose({3}, {4}) == Element{2});
}

TEST_CASE("direct sum drops identity components") {
  const Group G = Group::direct_sum(std::vector<FiniteGroup>(5, FiniteGroup::cyclic(2)), weights_pow2_ksquared(5));
  const Element x{1, 1, 3, 1};
  const Element y{3, 1, 5, 1};
  CHECK(G.compose(x, y) == Element{1, 1, 5, 1});
  CHECK(G.identity().code.empty());
  CHECK(G.is_identity(G.compose(x, x)));
  CHECK_THROWS_AS(G.generators(), UnsupportedError);
}

TEST_CASE("alternating groups have the right order") {
  CHECK(FiniteGroup::alternating(5).order() == 60);
  CHECK(FiniteGroup::alternating(6).order() == 360);
  const Group A5 = Group::finite_simple(5);
  CHECK(A5.identity() == Element{0, 1, 2, 3, 4});
  CHECK(A5.is_finite());
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(Group::free_abelian(0), UsageError);
  CHECK_THROWS_AS(Group::finite_product({1, 3}), UsageError);
  CHECK_THROWS_AS(Group::direct_sum({FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)}, {2, 1}), UsageError);
  CHECK_THROWS_AS(Group::direct_sum({FiniteGroup::cyclic(2)}, {0.5}), UsageError);
}

TEST_CASE("validate rejects encodings that are not normal forms") {
  CHECK_THROWS_AS(Group::finite_product({3}).validate({3}), UsageError);
  CHECK_THROWS_AS(Group::heisenberg().validate({1, 2}), UsageError);
  const Group D = Group::direct_sum({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}, {1, 2});
  CHECK_THROWS_AS(D.validate({2, 1, 1, 1}), UsageError);  // unsorted indices
  CHECK_THROWS_AS(D.validate({1, 0}), UsageError);        // stored identity component
}

TEST_CASE("associativity and inverses on random samples") {
  Rng rng(2026);
  for (const Group& G : qmetric::testing::sample_groups()) {
    CAPTURE(G.describe());
    for (int i = 0; i < 1000; ++i) {
      const Element g = qmetric::testing::random_element(G, rng);
      const Element h = qmetric::testing::random_element(G, rng);
      const Element k = qmetric::testing::random_element(G, rng);
      REQUIRE(G.compose(G.compose(g, h), k) == G.compose(g, G.compose(h, k)));
      REQUIRE(G.is_identity(G.compose(g, G.inverse(g))));
      REQUIRE(G.inverse(G.inverse(g)) == g);
      REQUIRE(G.compose(g, G.identity()) == g);
      // re-encoding through validate leaves the normal form untouched
      G.validate(g);
      REQUIRE(Element(g.code) == g);
    }
  }
}

TEST_CASE("checked arithmetic reports overflow") {
  const Group Z = Group::free_abelian(1);
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(Z.compose({big}, {1}), OverflowError);
}

}  // TEST_SUITE
