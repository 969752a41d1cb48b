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

#include "core/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"

namespace qmetric {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in group law: " + std::to_string(a) + " + " +
                        std::to_string(b));
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in group law: " + std::to_string(a) + " * " +
                        std::to_string(b));
  }
  return out;
}

std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool is_even_permutation(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

}  // namespace

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ e.code.size();
  for (std::int64_t v : e.code) {
    h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string to_string(const Element& e) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.code.size(); ++i) {
    if (i) os << ',';
    os << e.code[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup FiniteGroup::cyclic(std::int64_t order) {
  if (order < 2) throw UsageError("cyclic component order must be >= 2");
  FiniteGroup g;
  g.order_ = order;
  return g;
}

FiniteGroup FiniteGroup::alternating(int degree) {
  if (degree < 5 || degree > 7) {
    throw UsageError("alternating component degree must be in [5, 7]");
  }
  std::vector<int> p(static_cast<std::size_t>(degree));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    if (is_even_permutation(p)) perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::map<std::vector<int>, std::int32_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<std::int32_t>(i);

  const std::size_t n = perms.size();
  auto table = std::make_shared<std::vector<std::int32_t>>(n * n);
  auto inv = std::make_shared<std::vector<std::int32_t>>(n);
  std::vector<int> prod(static_cast<std::size_t>(degree));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // (ab)(i) = a(b(i))
      for (int i = 0; i < degree; ++i) prod[i] = perms[a][perms[b][i]];
      const std::int32_t c = index.at(prod);
      (*table)[a * n + b] = c;
      if (c == 0) (*inv)[a] = static_cast<std::int32_t>(b);
    }
  }
  FiniteGroup g;
  g.order_ = static_cast<std::int64_t>(n);
  g.degree_ = degree;
  g.table_ = std::move(table);
  g.inverse_ = std::move(inv);
  return g;
}

std::int64_t FiniteGroup::multiply(std::int64_t a, std::int64_t b) const {
  if (is_cyclic()) return (a + b) % order_;
  return (*table_)[static_cast<std::size_t>(a * order_ + b)];
}

std::int64_t FiniteGroup::inverse(std::int64_t a) const {
  if (is_cyclic()) return a == 0 ? 0 : order_ - a;
  return (*inverse_)[static_cast<std::size_t>(a)];
}

std::string FiniteGroup::describe() const {
  if (is_cyclic()) return "Z/" + std::to_string(order_);
  return "A" + std::to_string(degree_);
}

// ---------------------------------------------------------------------------
// Group

std::string family_name(Family f) {
  switch (f) {
    case Family::free_abelian: return "free-abelian";
    case Family::heisenberg: return "heisenberg";
    case Family::finite_product: return "finite-product";
    case Family::finite_simple: return "finite-simple";
    case Family::direct_sum: return "direct-sum";
  }
  return "unknown";
}

struct Group::Impl {
  Family family = Family::free_abelian;
  int rank = 0;                      // free-abelian rank, or permutation degree
  std::vector<std::int64_t> orders;  // finite-product
  std::vector<FiniteGroup> components;
  std::vector<double> weights;
};

Group Group::free_abelian(int rank) {
  if (rank < 1) throw UsageError("free-abelian rank must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::free_abelian;
  impl->rank = rank;
  return Group(std::move(impl));
}

Group Group::heisenberg() {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::heisenberg;
  impl->rank = 3;
  return Group(std::move(impl));
}

Group Group::finite_product(std::vector<std::int64_t> orders) {
  if (orders.empty()) throw UsageError("finite-product needs at least one component");
  for (auto m : orders) {
    if (m < 2) throw UsageError("finite-product component orders must be >= 2");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = Family::finite_product;
  impl->rank = static_cast<int>(orders.size());
  impl->orders = std::move(orders);
  return Group(std::move(impl));
}

Group Group::finite_simple(int degree) {
  if (degree < 5) throw UsageError("finite-simple degree must be >= 5 (A_n non-abelian simple)");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::finite_simple;
  impl->rank = degree;
  return Group(std::move(impl));
}

Group Group::direct_sum(std::vector<FiniteGroup> components, std::vector<double> weights) {
  if (components.empty()) throw UsageError("direct-sum needs at least one component");
  if (weights.size() != components.size()) {
    throw UsageError("direct-sum needs exactly one weight per materialized component");
  }
  if (!(weights.front() >= 1.0)) throw UsageError("direct-sum weights need a_1 >= 1");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) throw UsageError("direct-sum weights must be finite");
    if (i > 0 && !(weights[i] > weights[i - 1])) {
      throw UsageError("direct-sum weights must be strictly increasing");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->family = Family::direct_sum;
  impl->rank = static_cast<int>(components.size());
  impl->components = std::move(components);
  impl->weights = std::move(weights);
  return Group(std::move(impl));
}

Family Group::family() const { return impl_->family; }
int Group::rank() const { return impl_->rank; }
const std::vector<std::int64_t>& Group::orders() const { return impl_->orders; }
const std::vector<FiniteGroup>& Group::components() const { return impl_->components; }
const std::vector<double>& Group::weights() const { return impl_->weights; }

bool Group::is_finite() const {
  return impl_->family == Family::finite_product || impl_->family == Family::finite_simple;
}

std::string Group::describe() const {
  std::ostringstream os;
  switch (impl_->family) {
    case Family::free_abelian: os << "Z^" << impl_->rank; break;
    case Family::heisenberg: os << "H3(Z)"; break;
    case Family::finite_product:
      for (std::size_t i = 0; i < impl_->orders.size(); ++i) {
        os << (i ? " x " : "") << "Z/" << impl_->orders[i];
      }
      break;
    case Family::finite_simple: os << "A" << impl_->rank; break;
    case Family::direct_sum:
      os << "direct sum of " << impl_->components.size() << " finite groups";
      break;
  }
  return os.str();
}

Element Group::identity() const {
  switch (impl_->family) {
    case Family::free_abelian:
      return Element(std::vector<std::int64_t>(static_cast<std::size_t>(impl_->rank), 0));
    case Family::heisenberg: return Element{0, 0, 0};
    case Family::finite_product:
      return Element(std::vector<std::int64_t>(impl_->orders.size(), 0));
    case Family::finite_simple: {
      std::vector<std::int64_t> p(static_cast<std::size_t>(impl_->rank));
      std::iota(p.begin(), p.end(), 0);
      return Element(std::move(p));
    }
    case Family::direct_sum: return Element{};
  }
  return Element{};
}

bool Group::is_identity(const Element& g) const { return g == identity(); }

void Group::validate(const Element& g) const {
  const auto& c = g.code;
  const auto bad = [&](const std::string& why) {
    throw UsageError("element " + to_string(g) + " is not in " + describe() + ": " + why);
  };
  switch (impl_->family) {
    case Family::free_abelian:
      if (c.size() != static_cast<std::size_t>(impl_->rank)) bad("wrong rank");
      break;
    case Family::heisenberg:
      if (c.size() != 3) bad("expected a triple");
      break;
    case Family::finite_product:
      if (c.size() != impl_->orders.size()) bad("wrong number of components");
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < 0 || c[i] >= impl_->orders[i]) bad("residue out of range");
      }
      break;
    case Family::finite_simple: {
      if (c.size() != static_cast<std::size_t>(impl_->rank)) bad("wrong degree");
      std::vector<bool> seen(c.size(), false);
      for (auto v : c) {
        if (v < 0 || v >= static_cast<std::int64_t>(c.size()) || seen[v]) bad("not a permutation");
        seen[v] = true;
      }
      std::vector<int> p(c.begin(), c.end());
      if (!is_even_permutation(p)) bad("odd permutation");
      break;
    }
    case Family::direct_sum: {
      if (c.size() % 2 != 0) bad("odd-length sparse encoding");
      const auto n = static_cast<std::int64_t>(impl_->components.size());
      std::int64_t prev = 0;
      for (std::size_t j = 0; j < c.size(); j += 2) {
        if (c[j] <= prev || c[j] > n) bad("component index out of order or range");
        const auto& comp = impl_->components[static_cast<std::size_t>(c[j] - 1)];
        if (c[j + 1] <= 0 || c[j + 1] >= comp.order()) bad("component value out of range");
        prev = c[j];
      }
      break;
    }
  }
}

Element Group::compose(const Element& g, const Element& h) const {
  validate(g);
  validate(h);
  const auto& a = g.code;
  const auto& b = h.code;
  switch (impl_->family) {
    case Family::free_abelian: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
      return Element(std::move(out));
    }
    case Family::heisenberg:
      // [[1,a,c],[0,1,b],[0,0,1]] products: c' = c1 + c2 + a1 b2.
      return Element{checked_add(a[0], b[0]), checked_add(a[1], b[1]),
                     checked_add(checked_add(a[2], b[2]), checked_mul(a[0], b[1]))};
    case Family::finite_product: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % impl_->orders[i];
      return Element(std::move(out));
    }
    case Family::finite_simple: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
      return Element(std::move(out));
    }
    case Family::direct_sum: {
      std::vector<std::int64_t> out;
      out.reserve(a.size() + b.size());
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i] < b[j])) {
          out.push_back(a[i]);
          out.push_back(a[i + 1]);
          i += 2;
        } else if (i >= a.size() || b[j] < a[i]) {
          out.push_back(b[j]);
          out.push_back(b[j + 1]);
          j += 2;
        } else {
          const auto& comp = impl_->components[static_cast<std::size_t>(a[i] - 1)];
          const std::int64_t v = comp.multiply(a[i + 1], b[j + 1]);
          if (v != 0) {
            out.push_back(a[i]);
            out.push_back(v);
          }
          i += 2;
          j += 2;
        }
      }
      return Element(std::move(out));
    }
  }
  return Element{};
}

Element Group::inverse(const Element& g) const {
  validate(g);
  const auto& a = g.code;
  switch (impl_->family) {
    case Family::free_abelian: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_neg(a[i]);
      return Element(std::move(out));
    }
    case Family::heisenberg:
      // (a,b,c)^{-1} = (-a, -b, ab - c)
      return Element{checked_neg(a[0]), checked_neg(a[1]),
                     checked_add(checked_mul(a[0], a[1]), checked_neg(a[2]))};
    case Family::finite_product: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(-a[i], impl_->orders[i]);
      return Element(std::move(out));
    }
    case Family::finite_simple: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a[i])] = static_cast<std::int64_t>(i);
      return Element(std::move(out));
    }
    case Family::direct_sum: {
      std::vector<std::int64_t> out(a);
      for (std::size_t j = 0; j < out.size(); j += 2) {
        out[j + 1] = impl_->components[static_cast<std::size_t>(out[j] - 1)].inverse(out[j + 1]);
      }
      return Element(std::move(out));
    }
  }
  return Element{};
}

std::vector<Element> Group::generators() const {
  std::vector<Element> gens;
  const auto push_unique = [&](Element e) {
    if (std::find(gens.begin(), gens.end(), e) == gens.end()) gens.push_back(std::move(e));
  };
  switch (impl_->family) {
    case Family::free_abelian:
      for (int i = 0; i < impl_->rank; ++i) {
        for (std::int64_t s : {1, -1}) {
          std::vector<std::int64_t> v(static_cast<std::size_t>(impl_->rank), 0);
          v[static_cast<std::size_t>(i)] = s;
          push_unique(Element(std::move(v)));
        }
      }
      break;
    case Family::heisenberg:
      push_unique(Element{1, 0, 0});
      push_unique(Element{-1, 0, 0});
      push_unique(Element{0, 1, 0});
      push_unique(Element{0, -1, 0});
      break;
    case Family::finite_product:
      for (std::size_t i = 0; i < impl_->orders.size(); ++i) {
        for (std::int64_t s : {std::int64_t{1}, impl_->orders[i] - 1}) {
          std::vector<std::int64_t> v(impl_->orders.size(), 0);
          v[i] = s;
          push_unique(Element(std::move(v)));
        }
      }
      break;
    case Family::finite_simple: {
      // A_n is generated by the 3-cycle (0 1 2) together with the n-cycle
      // (0 1 ... n-1) for odd n, or the (n-1)-cycle (1 2 ... n-1) for even n.
      const auto n = static_cast<std::size_t>(impl_->rank);
      std::vector<std::int64_t> three(n);
      std::iota(three.begin(), three.end(), 0);
      three[0] = 1;
      three[1] = 2;
      three[2] = 0;
      std::vector<std::int64_t> cyc(n);
      std::iota(cyc.begin(), cyc.end(), 0);
      const std::size_t start = n % 2 == 1 ? 0 : 1;
      for (std::size_t i = start; i < n; ++i) cyc[i] = static_cast<std::int64_t>(i + 1 < n ? i + 1 : start);
      const Element t(three);
      const Element c(cyc);
      push_unique(t);
      push_unique(inverse(t));
      push_unique(c);
      push_unique(inverse(c));
      break;
    }
    case Family::direct_sum:
      throw UnsupportedError("direct sums of infinitely many finite groups are not finitely generated");
  }
  std::sort(gens.begin(), gens.end());
  return gens;
}

// ---------------------------------------------------------------------------
// Weight sequences

std::vector<double> weights_pow2_ksquared(std::size_t count) {
  if (count > 31) throw UsageError("2^(k^2) weights overflow a double beyond k = 31");
  std::vector<double> w(count);
  for (std::size_t k = 1; k <= count; ++k) w[k - 1] = std::ldexp(1.0, static_cast<int>(k * k));
  return w;
}

std::vector<double> weights_catch_up(const std::vector<FiniteGroup>& components) {
  std::vector<double> w;
  double prod = 1.0;
  for (const auto& c : components) {
    prod *= static_cast<double>(c.order());
    w.push_back(prod);
  }
  return w;
}

std::vector<double> weights_geometric(double gamma, std::size_t count) {
  if (!(gamma > 1.0)) throw UsageError("geometric weights need gamma > 1");
  std::vector<double> w(count);
  for (std::size_t n = 1; n <= count; ++n) w[n - 1] = std::pow(gamma, static_cast<double>(n));
  return w;
}

std::vector<double> weights_oscillating(double gamma1, double gamma2,
                                        const std::vector<std::int64_t>& breaks,
                                        const std::vector<FiniteGroup>& components) {
  if (!(gamma1 > 1.0) || !(gamma2 > gamma1)) {
    throw UsageError("oscillating weights need 1 < gamma1 < gamma2");
  }
  if (breaks.empty() || breaks.front() != 1) throw UsageError("oscillating breaks must start at 1");
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] <= breaks[i - 1]) throw UsageError("oscillating breaks must increase");
  }
  std::vector<double> w;
  w.reserve(components.size());
  double a = 1.0;
  std::size_t phase = 1;  // 1-based phase index k
  for (std::size_t n = 1; n <= components.size(); ++n) {
    w.push_back(a);
    while (phase < breaks.size() && static_cast<std::int64_t>(n) >= breaks[phase]) ++phase;
    const double gamma = phase % 2 == 1 ? gamma1 : gamma2;
    a *= std::pow(static_cast<double>(components[n - 1].order()), gamma);
  }
  return w;
}

}  // namespace qmetric
