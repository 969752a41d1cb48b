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

#ifndef QMETRIC_CORE_LENGTH_HPP
#define QMETRIC_CORE_LENGTH_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "core/group.hpp"

namespace qmetric {

inline constexpr std::size_t kDefaultBallCap = 20000;

enum class LengthKind { word, max_weight, logarithmic };

/// Enumerated ball B(r) = {x : L(x) <= r}. Elements are sorted by
/// (length, encoding), so the identity is always index 0 and indices are
/// reproducible across runs.
class BallTable {
 public:
  BallTable(double radius, std::vector<Element> elements, std::vector<double> lengths);

  // Largest length present in the ball (the breakpoint at or below the
  // requested radius).
  double radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::optional<std::size_t> index_of(const Element& g) const;
  bool contains(const Element& g) const { return index_.count(g) != 0; }

 private:
  double radius_;
  std::vector<Element> elements_;
  std::vector<double> lengths_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

using BallPtr = std::shared_ptr<const BallTable>;

/// A proper length function on a group together with its ball cache.
/// Copies share the cache; all members are safe to call concurrently.
class LengthFunction {
 public:
  // Word length for the group's symmetric generating set, multiplied by
  // `scale`.
  static LengthFunction word(Group group, double scale = 1.0);
  // L(x) = max{a_n : x_n != e_n} on a direct sum.
  static LengthFunction max_weight(Group group);
  // L(x) = ln(2|x|) on Z.
  static LengthFunction logarithmic(Group group);

  LengthKind kind() const;
  const Group& group() const;
  std::string describe() const;

  double length(const Element& g) const;
  BallPtr ball(double r) const;
  // |B(r)|, computed without enumeration where a closed count exists.
  std::uint64_t ball_count(double r) const;
  // ln |B(r)|; usable when |B(r)| does not fit in 64 bits.
  double log_ball_count(double r) const;
  // A(s,t) = {x : s < L(x) <= t}, in ball order.
  std::vector<Element> annulus(double s, double t) const;
  // Distinct values of L in (0, limit], ascending.
  std::vector<double> length_values(double limit) const;
  // Radii in (0, limit] where r -> B(r) or r -> B(2r) changes.
  std::vector<double> breakpoints(double limit) const;
  double min_positive_length() const;

  void set_ball_cap(std::size_t cap) const;
  std::size_t ball_cap() const;
  std::size_t peak_ball_size() const;

  struct Impl;

 private:
  explicit LengthFunction(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

// Sorts and removes values that agree within 2^-40 relative tolerance.
std::vector<double> dedupe_reals(std::vector<double> values);

}  // namespace qmetric

#endif  // QMETRIC_CORE_LENGTH_HPP
