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

#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"

namespace qmetric {

std::string to_string(Side s) {
  switch (s) {
    case Side::exact: return "exact";
    case Side::lower_bound: return "lower-bound";
    case Side::upper_bound: return "upper-bound";
    case Side::stabilized: return "stabilized";
  }
  return "unknown";
}

std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::pass: return "pass";
    case RecordStatus::fail: return "fail";
    case RecordStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

InequalityRecord compare(std::string name, std::string citation, double lhs, Side lhs_cert, double rhs,
                         Side rhs_cert, const Tolerance& tol, bool strict) {
  InequalityRecord r;
  r.name = std::move(name);
  r.citation = std::move(citation);
  r.lhs = lhs;
  r.lhs_cert = lhs_cert;
  r.rhs = rhs;
  r.rhs_cert = rhs_cert;
  r.strict = strict;
  r.margin = rhs - lhs;
  r.rigorous = (lhs_cert == Side::exact || lhs_cert == Side::lower_bound) &&
               (rhs_cert == Side::exact || rhs_cert == Side::upper_bound);
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    r.status = RecordStatus::inconclusive;
  } else if (strict) {
    r.status = lhs < rhs ? RecordStatus::pass : RecordStatus::fail;
  } else {
    const double slack = tol.abs + tol.rel * std::abs(rhs);
    r.status = lhs <= rhs + slack ? RecordStatus::pass : RecordStatus::fail;
  }
  return r;
}

std::size_t InequalityReport::count(RecordStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [s](const InequalityRecord& r) { return r.status == s; }));
}

std::size_t InequalityReport::rigorous_failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const InequalityRecord& r) {
    return r.rigorous && r.status == RecordStatus::fail;
  }));
}

std::vector<std::string> InequalityReport::failed_citations() const {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (r.rigorous && r.status == RecordStatus::fail &&
        std::find(out.begin(), out.end(), r.citation) == out.end()) {
      out.push_back(r.citation);
    }
  }
  return out;
}

double truncation_radius(const LengthFunction& L, double start, std::size_t max_elements) {
  const double floor_r = L.min_positive_length();
  double rho = start;
  for (int i = 0; i < 200 && rho >= floor_r; ++i) {
    try {
      if (L.ball_count(rho) <= max_elements) return rho;
    } catch (const CapExceeded&) {
    } catch (const UsageError&) {
    }
    rho *= 0.8;
  }
  return 0.0;
}

double lambda_norm_lower(const LengthFunction& L, const AlgebraElement& g, double rho) {
  if (g.is_zero()) return 0.0;
  const BallPtr ball = L.ball(rho);
  return operator_norm(lambda_matrix(L, g, ball->elements())).value;
}

namespace {

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

class Catalog {
 public:
  explicit Catalog(const Tolerance& tol) : tol_(tol) {}

  // Runs `fn`; ball-cap and range failures become an inconclusive record.
  void add(const std::string& name, const std::string& citation,
           const std::function<InequalityRecord()>& fn) {
    try {
      report.records.push_back(fn());
    } catch (const CapExceeded& e) {
      push_inconclusive(name, citation, e.what());
    } catch (const UsageError& e) {
      push_inconclusive(name, citation, e.what());
    }
  }

  InequalityRecord cmp(const std::string& name, const std::string& citation, double lhs, Side ls, double rhs,
                       Side rs, const std::string& detail = {}, bool strict = false) const {
    InequalityRecord r = compare(name, citation, lhs, ls, rhs, rs, tol_, strict);
    r.detail = detail;
    return r;
  }

  InequalityReport report;

 private:
  void push_inconclusive(const std::string& name, const std::string& citation, const std::string& why) {
    InequalityRecord r = compare(name, citation, nan(), Side::exact, nan(), Side::exact, tol_);
    r.detail = why;
    report.records.push_back(r);
  }

  Tolerance tol_;
};

std::string params(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << '=' << v;
    first = false;
  }
  return os.str();
}

AlgebraElement times_rational(const AlgebraElement& f, const std::function<Rational(const Element&)>& g) {
  AlgebraElement out;
  for (const auto& [x, c] : f.terms()) {
    const Rational v = g(x);
    if (v != Rational(0)) out.set(x, v == Rational(1) ? c : boost::rational_cast<double>(v) * c);
  }
  return out;
}

struct Triple {
  double r, s, t;
};

}  // namespace

InequalityReport verify_inequalities(const AlgebraElement& f, const ScaleFamily& fam, int N,
                                     const VerifyOptions& options) {
  const LengthFunction& L = fam.L;
  const Group& G = L.group();
  Catalog cat(options.tol);

  const double m = std::max(max_length(L, f), L.min_positive_length());
  const double W = weighted_l1(L, f);
  // J_D(f) is computed on first use so a cap hit lands inside a record
  std::optional<double> J_memo;
  auto J = [&] {
    if (!J_memo) J_memo = jd_exact(L, f).value;
    return *J_memo;
  };
  const double rho = truncation_radius(L, m, options.truncation_elements);
  auto lower = [&](const AlgebraElement& g) { return lambda_norm_lower(L, g, rho); };
  auto jd = [&](const AlgebraElement& g) { return jd_exact(L, g).value; };

  cat.add("jd-le-weighted-l1", "control", [&] {
    return cat.cmp("jd-le-weighted-l1", "control", J(), Side::exact, W, Side::upper_bound);
  });

  bool off_identity = false;
  for (const auto& [x, c] : f.terms()) off_identity = off_identity || !G.is_identity(x);
  if (off_identity) {
    cat.add("jd-positive", "norm", [&] {
      return cat.cmp("jd-positive", "norm", 0.0, Side::exact, J(), Side::exact, "J_D(f) > 0", true);
    });
  }

  for (const auto& [r, s] : std::vector<std::pair<double, double>>{
           {0.0, m / 2}, {m / 4, m / 2}, {m / 4, m}, {m / 2, m}, {0.4 * m, 0.9 * m}}) {
    cat.add("weight", "weight", [&, r = r, s = s] {
      const double n = localized_block(L, f, r, s).norm;
      return cat.cmp("weight", "weight", (s - r) * n, Side::exact, W, Side::upper_bound,
                     params({{"r", r}, {"s", s}}));
    });
  }

  const std::vector<Triple> triples{{m / 8, m / 3, 2 * m / 3}, {m / 6, m / 2, m}};
  for (const auto& [r, s, t] : triples) {
    const std::string p = params({{"r", r}, {"s", s}, {"t", t}});
    auto gf_holder = std::make_shared<std::optional<AlgebraElement>>();
    auto gf = [&, r = r, s = s, t = t, gf_holder]() -> const AlgebraElement& {
      if (!*gf_holder) *gf_holder = times_rational(f, [&](const Element& x) { return cutoff_value(L, r, s, t, x); });
      return **gf_holder;
    };
    auto hk = [&, r = r, s = s, t = t] {
      const double a = static_cast<double>(L.ball_count(t) - L.ball_count(s));
      return std::sqrt(a / static_cast<double>(L.ball_count(r)));
    };
    auto growth = [&, r = r, t = t] {
      return std::sqrt(static_cast<double>(L.ball_count(t)) / static_cast<double>(L.ball_count(r)));
    };

    cat.add("support", "support", [&, r = r, s = s, t = t] {
      // direct count, independent of the shortcut in cutoff_value
      const BallPtr ball = L.ball(r);
      auto in_A = [&](const Element& z) {
        const double l = L.length(z);
        return s < l && l <= t;
      };
      double bad = 0.0;
      for (const auto& [x, c] : f.terms()) {
        const Rational g(set_cutoff_count(G, ball->elements(), in_A, x), static_cast<std::int64_t>(ball->size()));
        const double l = L.length(x);
        if (g < Rational(0) || g > Rational(1)) bad += 1;
        if (g != Rational(0) && !(s - r < l && l <= t + r)) bad += 1;
        if (s + r < l && l <= t - r && g != Rational(1)) bad += 1;
      }
      return cat.cmp("support", "support", bad, Side::exact, 0.0, Side::exact, p);
    });
    cat.add("cutoff", "cutoff", [&] {
      return cat.cmp("cutoff", "cutoff", lower(gf()), Side::lower_bound, f.norm1() * hk(), Side::upper_bound, p);
    });
    cat.add("lip", "lip", [&, rr = rho] {
      const double lo = gf().is_zero() ? 0.0 : operator_norm(compressed_commutator(L, gf(), rr)).value;
      return cat.cmp("lip", "lip", lo, Side::lower_bound, W * hk(), Side::upper_bound, p);
    });
    cat.add("bound", "bound", [&, r = r] {
      return cat.cmp("bound", "bound", lower(gf()), Side::lower_bound, hk() * J() / r, Side::exact, p);
    });
    cat.add("jip1", "jip1", [&] {
      return cat.cmp("jip1", "jip1", jd(gf()), Side::exact, hk() * J(), Side::exact, p);
    });
    cat.add("power-norm", "power", [&, r = r] {
      return cat.cmp("power-norm", "power", lower(gf()), Side::lower_bound, growth() * J() / r, Side::exact, p);
    });
    cat.add("power-jd", "power", [&] {
      return cat.cmp("power-jd", "power", jd(gf()), Side::exact, growth() * J(), Side::exact, p);
    });
  }

  {
    // E = every other element of B(r), F = every other element of A(2r, m)
    const double r = m / 4;
    const std::string p = params({{"r", r}, {"t", m}});
    auto sub = std::make_shared<std::optional<std::tuple<AlgebraElement, double, double>>>();
    auto get = [&, r, sub]() -> const std::tuple<AlgebraElement, double, double>& {
      if (!*sub) {
        std::vector<Element> E;
        const BallPtr ball = L.ball(r);
        for (std::size_t i = 0; i < ball->size(); i += 2) E.push_back(ball->elements()[i]);
        std::unordered_set<Element, ElementHash> F;
        if (m > 2 * r) {
          const auto ann = L.annulus(2 * r, m);
          for (std::size_t i = 0; i < ann.size(); i += 2) F.insert(ann[i]);
        }
        auto in_F = [&](const Element& z) { return F.count(z) != 0; };
        AlgebraElement g;
        for (const auto& [x, c] : f.terms()) {
          const auto n = set_cutoff_count(G, E, in_F, x);
          if (n) g.set(x, static_cast<double>(n) * c);
        }
        *sub = std::make_tuple(g, static_cast<double>(E.size()), static_cast<double>(F.size()));
      }
      return **sub;
    };
    cat.add("subsets-norm", "subsets", [&, r] {
      const auto& [g, e, fs] = get();
      return cat.cmp("subsets-norm", "subsets", lower(g), Side::lower_bound, std::sqrt(e * fs) * J() / r, Side::exact, p);
    });
    cat.add("subsets-jd", "subsets", [&] {
      const auto& [g, e, fs] = get();
      return cat.cmp("subsets-jd", "subsets", jd(g), Side::exact, std::sqrt(e * fs) * J(), Side::exact, p);
    });
  }

  for (const auto& [r, s, t] : std::vector<Triple>{{m / 10, m / 3, 2 * m / 3}, {m / 16, m / 4, m / 2}}) {
    const std::string p = params({{"r", r}, {"s", s}, {"t", t}});
    AlgebraElement fz;
    for (const auto& [x, c] : f.terms()) {
      const double l = L.length(x);
      const bool lower_gap = s - 2 * r < l && l <= s;
      const bool upper_gap = t < l && l <= t + 2 * r;
      if (!lower_gap && !upper_gap) fz.set(x, c);
    }
    const AlgebraElement cut = restrict_annulus(L, fz, s, t);
    auto growth = [&, r = r, t = t] {
      return std::sqrt(static_cast<double>(L.ball_count(t + r)) / static_cast<double>(L.ball_count(r)));
    };
    cat.add("keyprop-norm", "keyprop", [&, r = r] {
      return cat.cmp("keyprop-norm", "keyprop", lower(cut), Side::lower_bound, growth() * jd(fz) / r, Side::exact, p);
    });
    cat.add("keyprop-jd", "keyprop", [&] {
      return cat.cmp("keyprop-jd", "keyprop", jd(cut), Side::exact, growth() * jd(fz), Side::exact, p);
    });
  }

  // scale family
  for (int n = 1; fam.scale(n) - fam.scale(n - 1) < m; ++n) {
    cat.add("nilin", "nilin", [&, n] {
      const AlgebraElement gf = times_rational(f, [&](const Element& x) { return fam.g_value(n, x); });
      return cat.cmp("nilin", "nilin", lower(gf), Side::lower_bound, fam.C1 * fam.scale(-n) * J(), Side::exact,
                     params({{"n", n}}));
    });
    cat.add("disjoint", "disjoint", [&, n] {
      double overlap = 0.0;
      for (const auto& [x, c] : f.terms()) {
        if (fam.g_value(n, x) != Rational(0) && fam.g_value(n + 2, x) != Rational(0)) overlap += 1;
      }
      return cat.cmp("disjoint", "disjoint", overlap, Side::exact, 0.0, Side::exact, params({{"n", n}}));
    });
  }

  const Decomposition d = sharp_flat_decompose(f, fam, N);
  const double RN = fam.scale(-2 * N);
  const std::string pN = params({{"N", N}});
  cat.add("double", "double", [&] {
    return cat.cmp("double", "double", lower(d.p), Side::lower_bound, 2 * fam.C1 * RN * J(), Side::exact, pN);
  });
  cat.add("jip2", "jip2", [&] {
    return cat.cmp("jip2", "jip2", jd(d.p), Side::exact, fam.C2 * J(), Side::exact, pN);
  });
  // n = N is always listed so the band records exist even when supp f misses every band
  std::vector<int> band_levels{N};
  for (int n : d.bands) {
    if (n != N) band_levels.push_back(n);
  }
  for (int n : band_levels) {
    const AnnulusBand b = band(fam, n);
    const AlgebraElement qn = restrict_annulus(L, d.q, b.s, b.t);
    const std::string pn = params({{"N", N}, {"n", n}});
    cat.add("band-radii", "radius-choice", [&, n] {
      return cat.cmp("band-radii", "radius-choice", band_conditions_hold(fam, n) ? 0.0 : 1.0, Side::exact, 0.0,
                     Side::exact, pn);
    });
    cat.add("qcut", "qcut", [&, n] {
      return cat.cmp("qcut", "qcut", lower(qn), Side::lower_bound, fam.C4 * fam.scale(-2 * n) * J(), Side::exact, pn);
    });
    cat.add("qcut-via-q", "qcut", [&, n] {
      return cat.cmp("qcut-via-q", "qcut", lower(qn), Side::lower_bound, fam.C3 * fam.scale(-2 * n) * jd(d.q),
                     Side::exact, pn);
    });
  }
  cat.add("sum", "sum", [&] {
    return cat.cmp("sum", "sum", lower(d.rho), Side::lower_bound, 2 * fam.C4 * RN * J(), Side::exact, pN);
  });
  cat.add("econt", "econt", [&] {
    return cat.cmp("econt", "econt", jd(d.rho), Side::exact, 4 * fam.C4 * J(), Side::exact, pN);
  });
  cat.add("sharp-norm", "assembly", [&] {
    return cat.cmp("sharp-norm", "assembly", lower(d.sharp), Side::lower_bound, 2 * (fam.C1 + fam.C4) * RN * J(),
                   Side::exact, pN);
  });
  cat.add("flat-jd", "assembly", [&] {
    return cat.cmp("flat-jd", "assembly", jd(d.flat), Side::exact, (1 + fam.C2 + 4 * fam.C4) * J(), Side::exact, pN);
  });
  cat.add("flat-support", "assembly", [&] {
    return cat.cmp("flat-support", "assembly", max_length(L, d.flat), Side::exact, d.support_radius, Side::exact, pN);
  });
  cat.add("split-identity", "assembly", [&] {
    return cat.cmp("split-identity", "assembly", d.max_drift, Side::exact, 0.0, Side::exact, pN);
  });
  return cat.report;
}

}  // namespace qmetric
