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

#ifndef QMETRIC_CORE_GROUP_HPP
#define QMETRIC_CORE_GROUP_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qmetric {

/// Normal-form encoding of a group element. Two elements of the same group
/// are equal iff their encodings are identical, so the encoding doubles as a
/// hash key and as the deterministic tie-break order inside balls.
///
/// Layouts per family:
///   free-abelian    (x_1, ..., x_n)
///   heisenberg      (a, b, c) for the matrix [[1,a,c],[0,1,b],[0,0,1]]
///   finite-product  residues (r_1, ..., r_k), 0 <= r_i < m_i
///   finite-simple   permutation images (p(0), ..., p(n-1))
///   direct-sum      (i_1, v_1, i_2, v_2, ...) with 1-based component index
///                   i_1 < i_2 < ... and v_j the non-identity component value
struct Element {
  std::vector<std::int64_t> code;

  Element() = default;
  explicit Element(std::vector<std::int64_t> c) : code(std::move(c)) {}
  Element(std::initializer_list<std::int64_t> c) : code(c) {}

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element& a, const Element& b) {
    return std::lexicographical_compare_three_way(a.code.begin(), a.code.end(), b.code.begin(),
                                                  b.code.end());
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

std::string to_string(const Element& e);

/// A small finite group used as a component of finite products and direct
/// sums. Elements are indices 0..order-1 with 0 the identity.
class FiniteGroup {
 public:
  static FiniteGroup cyclic(std::int64_t order);
  // Alternating group A_n, 5 <= n <= 7; elements are the even permutations in
  // lexicographic order.
  static FiniteGroup alternating(int degree);

  std::int64_t order() const { return order_; }
  bool is_cyclic() const { return degree_ == 0; }
  int degree() const { return degree_; }
  std::int64_t multiply(std::int64_t a, std::int64_t b) const;
  std::int64_t inverse(std::int64_t a) const;
  std::string describe() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.degree_ == b.degree_;
  }

 private:
  std::int64_t order_ = 1;
  int degree_ = 0;  // 0 for cyclic groups
  std::shared_ptr<const std::vector<std::int32_t>> table_;
  std::shared_ptr<const std::vector<std::int32_t>> inverse_;
};

enum class Family { free_abelian, heisenberg, finite_product, finite_simple, direct_sum };

std::string family_name(Family f);

/// Immutable group descriptor with the group law. Cheap to copy; copies share
/// state and are safe to use from several threads.
class Group {
 public:
  static Group free_abelian(int rank);
  static Group heisenberg();
  static Group finite_product(std::vector<std::int64_t> orders);
  static Group finite_simple(int degree);
  // Direct sum of the listed components with weights a_1 < a_2 < ... used by
  // the max-weight length function. Only the listed components are
  // materialized.
  static Group direct_sum(std::vector<FiniteGroup> components, std::vector<double> weights);

  Family family() const;
  int rank() const;
  const std::vector<std::int64_t>& orders() const;
  const std::vector<FiniteGroup>& components() const;
  const std::vector<double>& weights() const;
  bool is_finite() const;
  std::string describe() const;

  Element identity() const;
  bool is_identity(const Element& g) const;
  Element compose(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  // Symmetric generating set. Throws UnsupportedError for direct sums.
  std::vector<Element> generators() const;

  // Throws UsageError when the encoding is not a normal form of this group.
  void validate(const Element& g) const;

  friend bool operator==(const Group& a, const Group& b) { return a.impl_ == b.impl_; }

  struct Impl;

 private:
  explicit Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Weight sequences for direct sums; the returned vectors hold a_1..a_count.
std::vector<double> weights_pow2_ksquared(std::size_t count);
std::vector<double> weights_catch_up(const std::vector<FiniteGroup>& components);
std::vector<double> weights_geometric(double gamma, std::size_t count);
// a_1 = 1 and a_{n+1} = a_n * |G_n|^gamma, where gamma alternates between
// gamma1 (odd phases) and gamma2 (even phases) with phase k covering
// breaks[k-1] <= n < breaks[k]. breaks[0] must be 1.
std::vector<double> weights_oscillating(double gamma1, double gamma2,
                                        const std::vector<std::int64_t>& breaks,
                                        const std::vector<FiniteGroup>& components);

}  // namespace qmetric

#endif  // QMETRIC_CORE_GROUP_HPP
