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

#include "core/length.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"

namespace qmetric {

BallTable::BallTable(double radius, std::vector<Element> elements, std::vector<double> lengths)
    : radius_(radius), elements_(std::move(elements)), lengths_(std::move(lengths)) {
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
}

std::optional<std::size_t> BallTable::index_of(const Element& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> dedupe_reals(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(values.size());
  const double tol = std::ldexp(1.0, -40);
  for (double v : values) {
    if (!out.empty() && std::abs(v - out.back()) <= tol * std::max(std::abs(v), std::abs(out.back()))) {
      continue;
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct LengthFunction::Impl {
  explicit Impl(Group g, LengthKind k) : group(std::move(g)), kind(k) {}
  virtual ~Impl() = default;

  Group group;
  LengthKind kind;
  mutable std::recursive_mutex mu;
  std::size_t cap = kDefaultBallCap;
  std::size_t peak = 0;
  std::map<std::int64_t, BallPtr> cache;

  virtual std::string describe() const = 0;
  virtual double length(const Element& g) = 0;
  // Canonical key of B(r): equal keys mean equal balls.
  virtual std::int64_t ball_key(double r) = 0;
  virtual BallPtr build_ball(std::int64_t key) = 0;
  virtual std::uint64_t ball_count(double r) = 0;
  virtual double log_ball_count(double r) { return std::log(static_cast<double>(ball_count(r))); }
  virtual std::vector<double> length_values(double limit) = 0;
  virtual double min_positive_length() = 0;

  BallPtr ball(double r) {
    if (!(r >= 0.0)) throw UsageError("ball radius must be >= 0");
    const std::int64_t key = ball_key(r);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    BallPtr b = build_ball(key);
    peak = std::max(peak, b->size());
    cache.emplace(key, b);
    return b;
  }

  void check_cap(std::uint64_t projected, double r) const {
    if (projected > cap) {
      std::ostringstream os;
      os << "ball B(" << r << ") would hold " << projected << " elements, above the cap of " << cap;
      throw CapExceeded(os.str());
    }
  }
};

namespace {

// Word length by breadth-first search over the right Cayley graph, with all
// layers cached.
struct WordImpl final : LengthFunction::Impl {
  WordImpl(Group g, double s) : Impl(std::move(g), LengthKind::word), scale(s) {
    gens = group.generators();
    const Element e = group.identity();
    dist.emplace(e, 0);
    layers.push_back({e});
    total = 1;
  }

  double scale;
  std::vector<Element> gens;
  std::unordered_map<Element, std::int64_t, ElementHash> dist;
  std::vector<std::vector<Element>> layers;
  std::size_t total = 0;
  bool exhausted = false;

  std::string describe() const override {
    std::ostringstream os;
    os << "word length";
    if (scale != 1.0) os << " x " << scale;
    return os.str();
  }

  // Ensures layers 0..k exist (or the group is exhausted).
  void extend_to(std::int64_t k) {
    while (!exhausted && static_cast<std::int64_t>(layers.size()) <= k) {
      std::vector<Element> next;
      for (const Element& g : layers.back()) {
        for (const Element& s : gens) {
          Element x = group.compose(g, s);
          if (dist.count(x) == 0) {
            next.push_back(x);
            dist.emplace(std::move(x), static_cast<std::int64_t>(layers.size()));
          }
        }
      }
      if (next.empty()) {
        exhausted = true;
        break;
      }
      if (total + next.size() > cap) {
        for (const auto& x : next) dist.erase(x);
        check_cap(total + next.size(), static_cast<double>(layers.size()) * scale);
      }
      std::sort(next.begin(), next.end());
      total += next.size();
      peak = std::max<std::size_t>(peak, total);
      layers.push_back(std::move(next));
    }
  }

  double length(const Element& g) override {
    group.validate(g);
    for (;;) {
      if (auto it = dist.find(g); it != dist.end()) return static_cast<double>(it->second) * scale;
      if (exhausted) throw UsageError("element " + to_string(g) + " unreachable from generators");
      extend_to(static_cast<std::int64_t>(layers.size()));
    }
  }

  std::int64_t layer_bound(double r) const {
    auto k = static_cast<std::int64_t>(std::floor(r / scale));
    while (static_cast<double>(k + 1) * scale <= r) ++k;
    while (k > 0 && static_cast<double>(k) * scale > r) --k;
    return k;
  }

  std::int64_t ball_key(double r) override {
    const std::int64_t k = layer_bound(r);
    extend_to(k);
    return std::min<std::int64_t>(k, static_cast<std::int64_t>(layers.size()) - 1);
  }

  BallPtr build_ball(std::int64_t key) override {
    extend_to(key);
    std::vector<Element> elems;
    std::vector<double> lens;
    for (std::int64_t k = 0; k <= key; ++k) {
      for (const auto& x : layers[static_cast<std::size_t>(k)]) {
        elems.push_back(x);
        lens.push_back(static_cast<double>(k) * scale);
      }
    }
    return std::make_shared<BallTable>(static_cast<double>(key) * scale, std::move(elems), std::move(lens));
  }

  // |{x in Z^n : |x|_1 <= k}| = sum_j 2^j C(n,j) C(k,j)
  bool closed_count() const { return group.family() == Family::free_abelian; }

  std::uint64_t abelian_count(std::int64_t k) const {
    const int n = group.rank();
    unsigned __int128 total = 0;
    unsigned __int128 cn = 1, ck = 1;  // C(n,j), C(k,j)
    for (int j = 0; j <= n && j <= k; ++j) {
      if (j > 0) {
        cn = cn * static_cast<unsigned>(n - j + 1) / static_cast<unsigned>(j);
        ck = ck * static_cast<unsigned __int128>(k - j + 1) / static_cast<unsigned>(j);
      }
      const unsigned __int128 term = (static_cast<unsigned __int128>(1) << j) * cn * ck;
      total += term;
      if (ck >> 64 || term >> 64 || total >> 64) throw OverflowError("ball count exceeds 64 bits; use log_ball_count");
    }
    return static_cast<std::uint64_t>(total);
  }

  double log_ball_count(double r) override {
    if (!closed_count()) return std::log(static_cast<double>(ball_count(r)));
    const std::int64_t k = layer_bound(r);
    const int n = group.rank();
    std::vector<double> logs;
    for (int j = 0; j <= n && j <= k; ++j) {
      const double kk = static_cast<double>(k);
      logs.push_back(j * std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                     std::lgamma(kk + 1.0) - std::lgamma(j + 1.0) - std::lgamma(kk - j + 1.0));
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double sum = 0.0;
    for (double v : logs) sum += std::exp(v - top);
    return top + std::log(sum);
  }

  std::uint64_t ball_count(double r) override {
    if (closed_count()) return abelian_count(layer_bound(r));
    const std::int64_t key = ball_key(r);
    std::uint64_t n = 0;
    for (std::int64_t k = 0; k <= key; ++k) n += layers[static_cast<std::size_t>(k)].size();
    return n;
  }

  std::vector<double> length_values(double limit) override {
    std::int64_t k = layer_bound(limit);
    if (group.is_finite()) {
      extend_to(k);
      k = std::min<std::int64_t>(k, static_cast<std::int64_t>(layers.size()) - 1);
    }
    std::vector<double> out;
    for (std::int64_t j = 1; j <= k; ++j) out.push_back(static_cast<double>(j) * scale);
    return out;
  }

  double min_positive_length() override { return scale; }
};

struct MaxWeightImpl final : LengthFunction::Impl {
  explicit MaxWeightImpl(Group g) : Impl(std::move(g), LengthKind::max_weight) {
    if (group.family() != Family::direct_sum) {
      throw UsageError("max-weight length needs a direct-sum group");
    }
  }

  std::string describe() const override { return "max-weight length"; }

  const std::vector<double>& weights() const { return group.weights(); }

  double length(const Element& g) override {
    group.validate(g);
    if (g.code.empty()) return 0.0;
    // indices increase and weights increase, so the last index dominates
    return weights()[static_cast<std::size_t>(g.code[g.code.size() - 2] - 1)];
  }

  std::int64_t ball_key(double r) override {
    if (r > weights().back()) {
      std::ostringstream os;
      os << "radius " << r << " exceeds the largest materialized weight " << weights().back();
      throw UsageError(os.str());
    }
    return std::upper_bound(weights().begin(), weights().end(), r) - weights().begin();
  }

  BallPtr build_ball(std::int64_t m) override {
    const auto& comps = group.components();
    std::uint64_t projected = 1;
    for (std::int64_t i = 0; i < m; ++i) {
      const auto order = static_cast<std::uint64_t>(comps[static_cast<std::size_t>(i)].order());
      if (__builtin_mul_overflow(projected, order, &projected)) projected = UINT64_MAX;
    }
    check_cap(projected, m > 0 ? weights()[static_cast<std::size_t>(m - 1)] : 0.0);

    std::vector<std::int64_t> digits(static_cast<std::size_t>(m), 0);
    std::vector<std::pair<double, Element>> items;
    items.reserve(projected);
    for (std::uint64_t count = 0; count < projected; ++count) {
      std::vector<std::int64_t> code;
      double len = 0.0;
      for (std::int64_t i = 0; i < m; ++i) {
        if (digits[static_cast<std::size_t>(i)] != 0) {
          code.push_back(i + 1);
          code.push_back(digits[static_cast<std::size_t>(i)]);
          len = weights()[static_cast<std::size_t>(i)];
        }
      }
      items.emplace_back(len, Element(std::move(code)));
      for (std::int64_t i = 0; i < m; ++i) {
        auto& d = digits[static_cast<std::size_t>(i)];
        if (++d < comps[static_cast<std::size_t>(i)].order()) break;
        d = 0;
      }
    }
    std::sort(items.begin(), items.end());
    std::vector<Element> elems;
    std::vector<double> lens;
    elems.reserve(items.size());
    lens.reserve(items.size());
    for (auto& [len, e] : items) {
      lens.push_back(len);
      elems.push_back(std::move(e));
    }
    const double radius = m > 0 ? weights()[static_cast<std::size_t>(m - 1)] : 0.0;
    return std::make_shared<BallTable>(radius, std::move(elems), std::move(lens));
  }

  std::uint64_t ball_count(double r) override {
    const std::int64_t m = ball_key(r);
    std::uint64_t n = 1;
    for (std::int64_t i = 0; i < m; ++i) {
      const auto order = static_cast<std::uint64_t>(group.components()[static_cast<std::size_t>(i)].order());
      if (__builtin_mul_overflow(n, order, &n)) {
        throw OverflowError("ball count exceeds 64 bits; use log_ball_count");
      }
    }
    return n;
  }

  double log_ball_count(double r) override {
    const std::int64_t m = ball_key(r);
    double s = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      s += std::log(static_cast<double>(group.components()[static_cast<std::size_t>(i)].order()));
    }
    return s;
  }

  std::vector<double> length_values(double limit) override {
    std::vector<double> out;
    for (double a : weights()) {
      if (a <= limit) out.push_back(a);
    }
    return out;
  }

  double min_positive_length() override { return weights().front(); }
};

// L(x) = ln(2|x|) on Z.
struct LogImpl final : LengthFunction::Impl {
  explicit LogImpl(Group g) : Impl(std::move(g), LengthKind::logarithmic) {
    if (group.family() != Family::free_abelian || group.rank() != 1) {
      throw UsageError("logarithmic length is defined on Z only");
    }
  }

  std::string describe() const override { return "logarithmic length ln(2|x|)"; }

  static double value(std::int64_t m) {
    return m == 0 ? 0.0 : std::log(2.0 * static_cast<double>(m < 0 ? -m : m));
  }

  double length(const Element& g) override {
    group.validate(g);
    return value(g.code[0]);
  }

  // Largest m >= 0 with ln(2m) <= r (m = 0 when r < ln 2).
  static std::int64_t max_abs(double r) {
    if (r > 43.0) throw OverflowError("logarithmic ball radius too large for 64-bit counts");
    auto m = static_cast<std::int64_t>(std::floor(std::exp(r) / 2.0));
    while (value(m + 1) <= r) ++m;
    while (m > 0 && value(m) > r) --m;
    return m;
  }

  std::int64_t ball_key(double r) override { return max_abs(r); }

  BallPtr build_ball(std::int64_t m) override {
    check_cap(static_cast<std::uint64_t>(2 * m + 1), value(m));
    std::vector<Element> elems{Element{0}};
    std::vector<double> lens{0.0};
    for (std::int64_t x = 1; x <= m; ++x) {
      const double v = value(x);
      elems.push_back(Element{-x});
      lens.push_back(v);
      elems.push_back(Element{x});
      lens.push_back(v);
    }
    return std::make_shared<BallTable>(value(m), std::move(elems), std::move(lens));
  }

  std::uint64_t ball_count(double r) override {
    return static_cast<std::uint64_t>(2 * max_abs(r) + 1);
  }

  double log_ball_count(double r) override {
    if (r <= 43.0) return std::log(static_cast<double>(ball_count(r)));
    return r;  // 2 floor(e^r / 2) + 1 = e^r (1 + O(e^-r))
  }

  std::vector<double> length_values(double limit) override {
    const std::int64_t m = max_abs(limit);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t x = 1; x <= m; ++x) out.push_back(value(x));
    return out;
  }

  double min_positive_length() override { return value(1); }
};

}  // namespace

LengthFunction LengthFunction::word(Group group, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw UsageError("word length scale must be > 0");
  return LengthFunction(std::make_shared<WordImpl>(std::move(group), scale));
}

LengthFunction LengthFunction::max_weight(Group group) {
  return LengthFunction(std::make_shared<MaxWeightImpl>(std::move(group)));
}

LengthFunction LengthFunction::logarithmic(Group group) {
  return LengthFunction(std::make_shared<LogImpl>(std::move(group)));
}

LengthKind LengthFunction::kind() const { return impl_->kind; }
const Group& LengthFunction::group() const { return impl_->group; }
std::string LengthFunction::describe() const { return impl_->describe(); }

double LengthFunction::length(const Element& g) const {
  std::lock_guard lock(impl_->mu);
  return impl_->length(g);
}

BallPtr LengthFunction::ball(double r) const {
  std::lock_guard lock(impl_->mu);
  return impl_->ball(r);
}

std::uint64_t LengthFunction::ball_count(double r) const {
  if (!(r >= 0.0)) throw UsageError("ball radius must be >= 0");
  std::lock_guard lock(impl_->mu);
  return impl_->ball_count(r);
}

double LengthFunction::log_ball_count(double r) const {
  if (!(r >= 0.0)) throw UsageError("ball radius must be >= 0");
  std::lock_guard lock(impl_->mu);
  return impl_->log_ball_count(r);
}

std::vector<Element> LengthFunction::annulus(double s, double t) const {
  if (!(s < t)) throw UsageError("annulus A(s,t) needs s < t");
  if (!(s > 0.0)) throw UsageError("annulus A(s,t) needs s > 0");
  const BallPtr b = ball(t);
  std::vector<Element> out;
  for (std::size_t i = 0; i < b->size(); ++i) {
    if (b->lengths()[i] > s) out.push_back(b->elements()[i]);
  }
  return out;
}

std::vector<double> LengthFunction::length_values(double limit) const {
  std::lock_guard lock(impl_->mu);
  return impl_->length_values(limit);
}

std::vector<double> LengthFunction::breakpoints(double limit) const {
  if (!(limit >= 0.0)) throw UsageError("breakpoint limit must be >= 0");
  std::vector<double> pts;
  for (double v : length_values(limit)) pts.push_back(v);
  for (double v : length_values(2.0 * limit)) {
    if (v / 2.0 <= limit) pts.push_back(v / 2.0);
  }
  std::erase_if(pts, [](double v) { return !(v > 0.0); });
  return dedupe_reals(std::move(pts));
}

double LengthFunction::min_positive_length() const {
  std::lock_guard lock(impl_->mu);
  return impl_->min_positive_length();
}

void LengthFunction::set_ball_cap(std::size_t cap) const {
  std::lock_guard lock(impl_->mu);
  impl_->cap = cap;
}

std::size_t LengthFunction::ball_cap() const {
  std::lock_guard lock(impl_->mu);
  return impl_->cap;
}

std::size_t LengthFunction::peak_ball_size() const {
  std::lock_guard lock(impl_->mu);
  return impl_->peak;
}

}  // namespace qmetric
