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

#ifndef QMETRIC_CORE_CORPUS_HPP
#define QMETRIC_CORE_CORPUS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "core/algebra.hpp"

namespace qmetric {

// The named generator behind every random corpus; seeds are recorded in
// reports so runs can be replayed.
using CorpusRng = std::mt19937_64;

struct CorpusOptions {
  std::size_t size = 200;
  double support_radius = 12.0;
  int max_atoms = 6;
  // With probability 1/2 an element also gets a coefficient at e.
  bool allow_identity = true;
};

// Random f with 1..max_atoms atoms drawn uniformly from B(support_radius)
// minus e, coefficients uniform on [-1,1] + i[-1,1].
std::vector<AlgebraElement> random_corpus(const LengthFunction& L, const CorpusOptions& options,
                                          std::uint64_t seed);

// Random unit vector supported on `atoms` points of B(radius).
AlgebraElement random_unit_vector(const LengthFunction& L, double radius, int atoms, CorpusRng& rng);

}  // namespace qmetric

#endif  // QMETRIC_CORE_CORPUS_HPP
