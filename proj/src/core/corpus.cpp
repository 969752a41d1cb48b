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

#include "core/corpus.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace qmetric {

namespace {

Complex random_coefficient(CorpusRng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Complex c(u(rng), u(rng));
    if (c != Complex{}) return c;
  }
}

}  // namespace

std::vector<AlgebraElement> random_corpus(const LengthFunction& L, const CorpusOptions& options,
                                          std::uint64_t seed) {
  if (options.max_atoms < 1) throw UsageError("corpus max_atoms must be >= 1");
  const BallPtr ball = L.ball(options.support_radius);
  if (ball->size() < 2) throw UsageError("corpus support ball contains only the identity");
  CorpusRng rng(seed);
  std::uniform_int_distribution<int> natoms(1, options.max_atoms);
  std::uniform_int_distribution<std::size_t> pick(1, ball->size() - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<AlgebraElement> out;
  out.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    AlgebraElement f;
    const int k = natoms(rng);
    for (int a = 0; a < k; ++a) f.add(ball->elements()[pick(rng)], random_coefficient(rng));
    if (options.allow_identity && coin(rng)) f.add(ball->elements()[0], random_coefficient(rng));
    if (f.is_zero()) f.set(ball->elements()[pick(rng)], 1.0);
    out.push_back(std::move(f));
  }
  return out;
}

AlgebraElement random_unit_vector(const LengthFunction& L, double radius, int atoms, CorpusRng& rng) {
  const BallPtr ball = L.ball(radius);
  std::uniform_int_distribution<std::size_t> pick(0, ball->size() - 1);
  AlgebraElement xi;
  for (int a = 0; a < std::max(1, atoms); ++a) xi.add(ball->elements()[pick(rng)], random_coefficient(rng));
  if (xi.is_zero()) xi.set(ball->elements()[0], 1.0);
  return (1.0 / xi.norm2()) * xi;
}

}  // namespace qmetric
