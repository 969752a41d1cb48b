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
#include <set>

#include "core/errors.hpp"
#include "core/length.hpp"
#include "support.hpp"

using namespace qmetric;
using qmetric::testing::Rng;

namespace {

// Brute force: every product of at most `r` generators, no BFS bookkeeping.
std::set<Element> products_up_to(const Group& G, int r) {
  std::set<Element> all{G.identity()};
  std::set<Element> layer{G.identity()};
  const auto gens = G.generators();
  for (int i = 0; i < r; ++i) {
    std::set<Element> next;
    for (const Element& x : layer) {
      for (const Element& s : gens) next.insert(G.compose(x, s));
    }
    all.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

LengthFunction pow2_sum(std::size_t count) {
  return LengthFunction::max_weight(
      Group::direct_sum(std::vector<FiniteGroup>(count, FiniteGroup::cyclic(2)), weights_pow2_ksquared(count)));
}

}  // namespace

TEST_SUITE("length") {

TEST_CASE("word length values") {
  const LengthFunction Z = LengthFunction::word(Group::free_abelian(1));
  CHECK(Z.length({5}) == 5.0);
  CHECK(Z.length({-5}) == 5.0);
  CHECK(Z.length({0}) == 0.0);
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  CHECK(H.length({0, 0, 1}) == 4.0);
  CHECK(H.length({1, 1, 0}) == 2.0);
}

TEST_CASE("max-weight length on the power-of-two sum") {
  const LengthFunction L = pow2_sum(5);
  CHECK(L.length({2, 1}) == 16.0);
  CHECK(L.length({1, 1, 2, 1}) == 16.0);
  CHECK(L.length({}) == 0.0);
}

TEST_CASE("ball sizes") {
  const LengthFunction Z = LengthFunction::word(Group::free_abelian(1));
  CHECK(Z.ball(3)->size() == 7);
  CHECK(Z.ball(3.7)->size() == 7);
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  CHECK(Z2.ball(2)->size() == 13);
  const LengthFunction P = pow2_sum(5);
  for (int K = 1; K <= 5; ++K) {
    CHECK(P.ball(std::ldexp(1.0, K * K))->size() == (std::size_t{1} << K));
    CHECK(P.ball_count(std::ldexp(1.0, K * K)) == (std::uint64_t{1} << K));
  }
}

TEST_CASE("ball order puts the identity first and sorts by length") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  const BallPtr B = Z2.ball(3);
  CHECK(B->elements().front() == Element{0, 0});
  for (std::size_t i = 1; i < B->size(); ++i) {
    const auto key = [&](std::size_t j) { return std::make_pair(B->lengths()[j], B->elements()[j]); };
    CHECK(key(i - 1) < key(i));
  }
  const BallPtr small = Z2.ball(1);
  for (std::size_t i = 0; i < small->size(); ++i) CHECK(B->elements()[i] == small->elements()[i]);
}

TEST_CASE("annulus") {
  const LengthFunction Z = LengthFunction::word(Group::free_abelian(1));
  auto A = Z.annulus(3, 6);
  std::sort(A.begin(), A.end());
  CHECK(A == std::vector<Element>{{-6}, {-5}, {-4}, {4}, {5}, {6}});
  CHECK(Z.annulus(0.2, 0.5).empty());
  CHECK(LengthFunction::word(Group::free_abelian(2)).annulus(1, 2).size() == 8);
  CHECK_THROWS_AS(Z.annulus(2, 2), UsageError);
}

TEST_CASE("breakpoints") {
  const LengthFunction Z = LengthFunction::word(Group::free_abelian(1));
  CHECK(Z.breakpoints(3) == std::vector<double>{0.5, 1, 1.5, 2, 2.5, 3});
  CHECK(Z.breakpoints(0.4).empty());
  // lengths {2, 16, ...} and halves {1, 8, ...}: nothing changes at 4 itself
  CHECK(pow2_sum(4).breakpoints(4) == std::vector<double>{1, 2});
  CHECK(pow2_sum(4).breakpoints(16) == std::vector<double>{1, 2, 8, 16});
}

TEST_CASE("closed counts agree with enumeration on free abelian groups") {
  for (int n = 1; n <= 4; ++n) {
    const LengthFunction L = LengthFunction::word(Group::free_abelian(n));
    for (int r = 0; r <= (n <= 2 ? 30 : 8); ++r) {
      CHECK(L.ball_count(r) == L.ball(r)->size());
      CHECK(L.log_ball_count(r + 0.5) == doctest::Approx(std::log(static_cast<double>(L.ball(r)->size()))));
    }
  }
  const LengthFunction Z = LengthFunction::word(Group::free_abelian(1));
  CHECK(Z.ball_count(1e12) == 2000000000001ULL);
}

TEST_CASE("logarithmic length") {
  const LengthFunction L = LengthFunction::logarithmic(Group::free_abelian(1));
  CHECK(L.length({3}) == doctest::Approx(std::log(6.0)));
  CHECK(L.length({-3}) == L.length({3}));
  CHECK(L.ball(std::log(6.0))->size() == 7);
  CHECK_THROWS_AS(LengthFunction::logarithmic(Group::free_abelian(2)), UsageError);
}

TEST_CASE("ball cap aborts enumeration") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  Z2.set_ball_cap(100);
  CHECK_THROWS_AS(Z2.ball(10), CapExceeded);
  CHECK(Z2.ball(6)->size() == 85);
}

TEST_CASE("word balls match an exhaustive product oracle") {
  for (const Group& G : {Group::free_abelian(2), Group::heisenberg(), Group::finite_simple(5),
                         Group::finite_product({3, 4})}) {
    CAPTURE(G.describe());
    const LengthFunction L = LengthFunction::word(G);
    std::size_t prev = 0;
    for (int r = 0; r <= 6; ++r) {
      const BallPtr B = L.ball(r);
      const auto oracle = products_up_to(G, r);
      CHECK(B->size() == oracle.size());
      CHECK(B->size() >= prev);
      prev = B->size();
      for (const Element& x : oracle) CHECK(B->contains(x));
    }
  }
}

TEST_CASE("length axioms on random samples") {
  Rng rng(17);
  for (const Group& G : qmetric::testing::sample_groups()) {
    CAPTURE(G.describe());
    const LengthFunction L = G.family() == Family::direct_sum ? LengthFunction::max_weight(G) : LengthFunction::word(G);
    CHECK(L.length(G.identity()) == 0.0);
    // Heisenberg products of two 7-letter words stay inside the default ball cap
    const int max_len = G.family() == Family::heisenberg ? 7 : 12;
    for (int i = 0; i < 10000; ++i) {
      const Element g = qmetric::testing::random_element(G, rng, max_len);
      const Element h = qmetric::testing::random_element(G, rng, max_len);
      REQUIRE(L.length(g) == L.length(G.inverse(g)));
      REQUIRE(L.length(G.compose(g, h)) <= L.length(g) + L.length(h));
      REQUIRE((L.length(g) == 0.0) == G.is_identity(g));
    }
  }
}

TEST_CASE("balls are constant between consecutive length values") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2), 0.75);
  const auto values = Z2.length_values(6);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double mid = 0.5 * (values[i] + values[i + 1]);
    CHECK(Z2.ball(mid)->size() == Z2.ball(values[i])->size());
    CHECK(Z2.ball(mid)->radius() == values[i]);
  }
}

}  // TEST_SUITE
