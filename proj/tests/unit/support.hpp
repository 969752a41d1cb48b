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


#ifndef QMETRIC_TESTS_SUPPORT_HPP
#define QMETRIC_TESTS_SUPPORT_HPP

#include <complex>
#include <random>
#include <vector>

#include "core/group.hpp"

namespace qmetric::testing {

using Rng = std::mt19937_64;

// Random product of `len` generators; covers every finitely generated family.
inline Element random_word(const Group& G, int len, Rng& rng) {
  const std::vector<Element> gens = G.generators();
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  Element x = G.identity();
  for (int i = 0; i < len; ++i) x = G.compose(x, gens[pick(rng)]);
  return x;
}

// Random direct-sum element touching components 1..G.components().size().
inline Element random_sparse(const Group& G, Rng& rng) {
  std::vector<std::int64_t> code;
  std::bernoulli_distribution coin(0.4);
  const auto& comps = G.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!coin(rng)) continue;
    std::uniform_int_distribution<std::int64_t> v(1, comps[i].order() - 1);
    code.push_back(static_cast<std::int64_t>(i + 1));
    code.push_back(v(rng));
  }
  return Element(code);
}

inline Element random_element(const Group& G, Rng& rng, int max_len = 12) {
  if (G.family() == Family::direct_sum) return random_sparse(G, rng);
  std::uniform_int_distribution<int> len(0, max_len);
  return random_word(G, len(rng), rng);
}

inline std::vector<Group> sample_groups() {
  return {Group::free_abelian(1),
          Group::free_abelian(3),
          Group::heisenberg(),
          Group::finite_product({2, 3, 5}),
          Group::finite_simple(5),
          Group::direct_sum({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::alternating(5),
                             FiniteGroup::cyclic(7)},
                            {1, 2, 4, 8})};
}

}  // namespace qmetric::testing

#endif  // QMETRIC_TESTS_SUPPORT_HPP
