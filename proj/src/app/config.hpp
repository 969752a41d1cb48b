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

#ifndef QMETRIC_APP_CONFIG_HPP
#define QMETRIC_APP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/corpus.hpp"
#include "core/state_metric.hpp"
#include "core/length.hpp"

namespace qmetric {

using Json = nlohmann::ordered_json;

enum class Command { growth, seminorm, decompose, verify, metric, covering_demo };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

// An element as written in a config: (encoding, coefficient) pairs, checked
// against the group once the group exists.
using RawTerm = std::pair<std::vector<std::int64_t>, Complex>;
using RawElement = std::vector<RawTerm>;

struct FamilySpec {
  int K = 2;
  std::optional<int> N;
  std::optional<double> epsilon;
  std::optional<double> C;  // default: observed max doubling ratio
};

struct GrowthSpec {
  std::vector<double> radii;
  double fit_lo = 0.5;
  double fit_hi = 1.0;
  std::optional<double> oscillation_tail;
  std::optional<double> chain_s, chain_r, chain_C;
};

struct SeminormSpec {
  std::vector<RawElement> elements;
  std::optional<CorpusOptions> corpus;
  std::optional<std::vector<double>> radii;
  bool dump_matrices = false;
};

struct DecomposeSpec {
  FamilySpec family;
  std::vector<RawElement> elements;
  std::optional<CorpusOptions> corpus;
  bool normalize_jd = false;
  std::size_t truncation_elements = 400;
};

struct VerifySpec {
  FamilySpec family;
  std::vector<RawElement> elements;
  std::optional<CorpusOptions> corpus;
  std::size_t truncation_elements = 400;
};

struct StateSpec {
  StateKind kind = StateKind::trace;
  RawElement xi;
  bool normalize = false;
  std::vector<double> weights;
  std::vector<StateSpec> parts;
};

struct RandomPairs {
  std::size_t count = 20;
  double support_radius = 2.0;
  int atoms = 2;
};

struct MetricSpec {
  double radius = 2.0;
  bool l1 = true;
  bool jd = true;
  int max_iterations = 500;
  double step = 1.0;
  std::vector<std::pair<StateSpec, StateSpec>> pairs;
  std::optional<RandomPairs> random_pairs;
};

struct CoveringSpec {
  FamilySpec family;
  double epsilon = 0.5;
  CorpusOptions corpus;
  std::size_t truncation_elements = 400;
};

struct GroupSpec {
  Json descriptor;  // validated echo
  std::string length_kind;
  double length_scale = 1.0;
};

struct ExperimentConfig {
  Json echo;
  GroupSpec group;
  std::optional<Command> command;
  std::uint64_t seed = 1;
  std::size_t ball_cap = kDefaultBallCap;
  int threads = 1;
  double tol_abs = 1e-9;
  double tol_rel = 1e-12;
  std::optional<GrowthSpec> growth;
  std::optional<SeminormSpec> seminorm;
  std::optional<DecomposeSpec> decompose;
  std::optional<VerifySpec> verify;
  std::optional<MetricSpec> metric;
  std::optional<CoveringSpec> covering;
};

// Strict parse: unknown keys, wrong types and numbers written as strings all
// raise UsageError naming the offending path.
ExperimentConfig parse_config(const std::string& text);

// Builds the length function described by the group block.
LengthFunction make_length(const GroupSpec& spec);

AlgebraElement materialize(const Group& G, const RawElement& raw);
State materialize(const Group& G, const StateSpec& spec);

}  // namespace qmetric

#endif  // QMETRIC_APP_CONFIG_HPP
