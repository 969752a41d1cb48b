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

#ifndef QMETRIC_CORE_ALGEBRA_HPP
#define QMETRIC_CORE_ALGEBRA_HPP

#include <complex>
#include <map>
#include <vector>

#include "core/group.hpp"
#include "core/length.hpp"

namespace qmetric {

using Complex = std::complex<double>;

/// Finitely supported function G -> C. Zero coefficients are never stored.
class AlgebraElement {
 public:
  AlgebraElement() = default;

  static AlgebraElement delta(const Element& s, Complex c = 1.0);

  Complex at(const Element& x) const;
  void set(const Element& x, Complex c);
  void add(const Element& x, Complex c);

  const std::map<Element, Complex>& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::vector<Element> support() const;

  double norm1() const;
  double norm2() const;
  double max_abs() const;

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  std::map<Element, Complex> terms_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex c, const AlgebraElement& a);

// f*(x) = conj(f(x^-1))
AlgebraElement star(const Group& G, const AlgebraElement& f);
// (f * g)(x) = sum_y f(x y^-1) g(y)
AlgebraElement convolve(const Group& G, const AlgebraElement& f, const AlgebraElement& g);
// Coefficientwise product (f g)(x) = f(x) g(x).
AlgebraElement pointwise(const AlgebraElement& f, const AlgebraElement& g);
// f restricted to {x : s < L(x) <= t}.
AlgebraElement restrict_annulus(const LengthFunction& L, const AlgebraElement& f, double s, double t);
AlgebraElement restrict_ball(const LengthFunction& L, const AlgebraElement& f, double r);

// sum_x |f(x)| L(x)
double weighted_l1(const LengthFunction& L, const AlgebraElement& f);
// max{L(s) : s in supp f}, 0 for f = 0
double max_length(const LengthFunction& L, const AlgebraElement& f);
// Largest |a - b| over coefficients.
double max_coeff_diff(const AlgebraElement& a, const AlgebraElement& b);

// Sorted by (length, encoding), the order used for every operator index set.
void sort_by_length(const LengthFunction& L, std::vector<Element>& elems);
// supp(f) . domain, deduplicated and sorted by (length, encoding).
std::vector<Element> product_set(const LengthFunction& L, const AlgebraElement& f,
                                 const std::vector<Element>& domain);

}  // namespace qmetric

#endif  // QMETRIC_CORE_ALGEBRA_HPP
