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

#include "core/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace qmetric {

AlgebraElement AlgebraElement::delta(const Element& s, Complex c) {
  AlgebraElement f;
  f.set(s, c);
  return f;
}

Complex AlgebraElement::at(const Element& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? Complex{} : it->second;
}

void AlgebraElement::set(const Element& x, Complex c) {
  if (c == Complex{}) {
    terms_.erase(x);
  } else {
    terms_[x] = c;
  }
}

void AlgebraElement::add(const Element& x, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(x, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

std::vector<Element> AlgebraElement::support() const {
  std::vector<Element> out;
  out.reserve(terms_.size());
  for (const auto& [x, c] : terms_) out.push_back(x);
  return out;
}

double AlgebraElement::norm1() const {
  double s = 0.0;
  for (const auto& [x, c] : terms_) s += std::abs(c);
  return s;
}

double AlgebraElement::norm2() const {
  double s = 0.0;
  for (const auto& [x, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const auto& [x, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out = a;
  for (const auto& [x, c] : b.terms()) out.add(x, c);
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out = a;
  for (const auto& [x, c] : b.terms()) out.add(x, -c);
  return out;
}

AlgebraElement operator*(Complex c, const AlgebraElement& a) {
  AlgebraElement out;
  for (const auto& [x, v] : a.terms()) out.set(x, c * v);
  return out;
}

AlgebraElement star(const Group& G, const AlgebraElement& f) {
  AlgebraElement out;
  for (const auto& [x, c] : f.terms()) out.set(G.inverse(x), std::conj(c));
  return out;
}

AlgebraElement convolve(const Group& G, const AlgebraElement& f, const AlgebraElement& g) {
  // x = s y with s in supp f, y in supp g contributes f(s) g(y)
  AlgebraElement out;
  for (const auto& [s, a] : f.terms()) {
    for (const auto& [y, b] : g.terms()) out.add(G.compose(s, y), a * b);
  }
  return out;
}

AlgebraElement pointwise(const AlgebraElement& f, const AlgebraElement& g) {
  AlgebraElement out;
  for (const auto& [x, c] : f.terms()) {
    const Complex d = g.at(x);
    if (d != Complex{}) out.set(x, c * d);
  }
  return out;
}

AlgebraElement restrict_annulus(const LengthFunction& L, const AlgebraElement& f, double s, double t) {
  AlgebraElement out;
  for (const auto& [x, c] : f.terms()) {
    const double l = L.length(x);
    if (s < l && l <= t) out.set(x, c);
  }
  return out;
}

AlgebraElement restrict_ball(const LengthFunction& L, const AlgebraElement& f, double r) {
  AlgebraElement out;
  for (const auto& [x, c] : f.terms()) {
    if (L.length(x) <= r) out.set(x, c);
  }
  return out;
}

double weighted_l1(const LengthFunction& L, const AlgebraElement& f) {
  double s = 0.0;
  for (const auto& [x, c] : f.terms()) s += std::abs(c) * L.length(x);
  return s;
}

double max_length(const LengthFunction& L, const AlgebraElement& f) {
  double m = 0.0;
  for (const auto& [x, c] : f.terms()) m = std::max(m, L.length(x));
  return m;
}

double max_coeff_diff(const AlgebraElement& a, const AlgebraElement& b) {
  double m = 0.0;
  for (const auto& [x, c] : a.terms()) m = std::max(m, std::abs(c - b.at(x)));
  for (const auto& [x, c] : b.terms()) {
    if (a.at(x) == Complex{}) m = std::max(m, std::abs(c));
  }
  return m;
}

void sort_by_length(const LengthFunction& L, std::vector<Element>& elems) {
  std::vector<std::pair<double, Element>> keyed;
  keyed.reserve(elems.size());
  for (auto& e : elems) keyed.emplace_back(L.length(e), std::move(e));
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size(); ++i) elems[i] = std::move(keyed[i].second);
}

std::vector<Element> product_set(const LengthFunction& L, const AlgebraElement& f,
                                 const std::vector<Element>& domain) {
  const Group& G = L.group();
  std::unordered_set<Element, ElementHash> seen;
  std::vector<Element> out;
  for (const auto& [s, c] : f.terms()) {
    for (const auto& y : domain) {
      Element x = G.compose(s, y);
      if (seen.insert(x).second) out.push_back(std::move(x));
    }
  }
  sort_by_length(L, out);
  return out;
}

}  // namespace qmetric
