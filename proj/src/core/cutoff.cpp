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

#include "core/cutoff.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/growth.hpp"

namespace qmetric {

Rational RationalFunction::at(const Element& x) const {
  auto it = terms.find(x);
  return it == terms.end() ? Rational(0) : it->second;
}

AlgebraElement RationalFunction::to_algebra() const {
  AlgebraElement out;
  for (const auto& [x, v] : terms) out.set(x, boost::rational_cast<double>(v));
  return out;
}

namespace {

void check_cutoff_params(double r, double s, double t) {
  if (!(r > 0.0) || !(s > 2.0 * r) || !(t > s)) {
    std::ostringstream os;
    os << "cutoff needs t > s > 2r > 0, got r=" << r << " s=" << s << " t=" << t;
    throw UsageError(os.str());
  }
}

}  // namespace

RationalFunction smoothed_annulus_cutoff(const LengthFunction& L, double r, double s, double t) {
  check_cutoff_params(r, s, t);
  const Group& G = L.group();
  const BallPtr ball = L.ball(r);
  const auto denom = static_cast<std::int64_t>(ball->size());
  std::unordered_map<Element, std::int64_t, ElementHash> counts;
  for (const auto& a : L.annulus(s, t)) {
    for (const auto& y : ball->elements()) ++counts[G.compose(a, y)];
  }
  RationalFunction g;
  for (const auto& [x, c] : counts) g.terms.emplace(x, Rational(c, denom));
  return g;
}

Rational cutoff_value(const LengthFunction& L, double r, double s, double t, const Element& x) {
  check_cutoff_params(r, s, t);
  const double lx = L.length(x);
  if (lx + r <= s || lx - r > t) return Rational(0);
  if (lx - r > s && lx + r <= t) return Rational(1);
  const Group& G = L.group();
  const BallPtr ball = L.ball(r);
  std::int64_t count = 0;
  for (const auto& y : ball->elements()) {
    const double l = L.length(G.compose(x, G.inverse(y)));
    if (s < l && l <= t) ++count;
  }
  return Rational(count, static_cast<std::int64_t>(ball->size()));
}

std::int64_t set_cutoff_count(const Group& G, const std::vector<Element>& E,
                              const std::function<bool(const Element&)>& in_F, const Element& x) {
  std::int64_t count = 0;
  for (const auto& y : E) {
    if (in_F(G.compose(x, G.inverse(y)))) ++count;
  }
  return count;
}

double ScaleFamily::scale(double n) const { return std::pow(R, n); }

Rational ScaleFamily::g_value(int n, const Element& x) const {
  if (n >= 1 && n <= n_max && g[static_cast<std::size_t>(n - 1)]) {
    return g[static_cast<std::size_t>(n - 1)]->at(x);
  }
  return cutoff_value(L, g_r(n), g_s(n), g_t(n), x);
}

ObservedDoubling observed_doubling(const LengthFunction& L, double hi) {
  // halve the window until the ball cap allows it
  ObservedDoubling od;
  hi = std::max(1.0, hi);
  for (;;) {
    try {
      const DoublingMax dm = max_doubling_ratio(L, 1.0, hi);
      od.validated_hi = hi;
      od.ratio = dm.ratio;
      od.at = dm.at;
      return od;
    } catch (const CapExceeded&) {
    } catch (const UsageError&) {
    }
    if (hi <= 1.0) return od;
    hi = std::max(1.0, hi / 2.0);
  }
}

ScaleFamily build_scale_family(const LengthFunction& L, int K, int n_max, double C, bool materialize) {
  if (K < 2 || K > 20) throw UsageError("scale exponent K must lie in [2, 20]");
  if (!(C >= 1.0) || !std::isfinite(C)) throw UsageError("doubling constant must be finite and >= 1");
  if (n_max < 0) throw UsageError("n_max must be >= 0");

  ScaleFamily fam(L);
  fam.K = K;
  fam.R = std::ldexp(1.0, K);
  fam.C = C;
  fam.n_max = n_max;
  fam.C1 = std::pow(C, K);
  fam.C2 = 4.0 * fam.R * fam.C1;
  fam.C3 = std::pow(C, 1.0 + std::log2(6.0 * fam.R + 7.0));
  fam.C4 = (1.0 + fam.C2) * fam.C3;

  const ObservedDoubling od = observed_doubling(L, fam.scale(n_max + 1));
  fam.validated_hi = od.validated_hi;
  fam.observed_ratio = od.ratio;
  fam.observed_at = od.at;
  if (fam.observed_ratio > C * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "doubling constant " << C << " is violated: |B(2r)|/|B(r)| = " << fam.observed_ratio
       << " at r = " << fam.observed_at;
    throw UsageError(os.str());
  }

  fam.g.assign(static_cast<std::size_t>(n_max), std::nullopt);
  if (materialize) {
    for (int n = 1; n <= n_max; ++n) {
      try {
        fam.g[static_cast<std::size_t>(n - 1)] = smoothed_annulus_cutoff(L, fam.g_r(n), fam.g_s(n), fam.g_t(n));
      } catch (const CapExceeded&) {
        break;
      } catch (const UsageError&) {
        break;  // beyond the materialized part of a direct sum
      }
    }
  }

  // support, plateau and disjointness on the materialized cutoffs
  for (int n = 1; n <= n_max; ++n) {
    const auto& gn = fam.g[static_cast<std::size_t>(n - 1)];
    if (!gn) continue;
    const double lo = fam.scale(n) - fam.scale(n - 1);
    const double up = fam.scale(n + 1) + fam.scale(n - 1);
    for (const auto& [x, v] : gn->terms) {
      const double l = L.length(x);
      if (v < Rational(0) || v > Rational(1) || !(lo < l && l <= up)) {
        throw InvariantViolation("support", "cutoff g_" + std::to_string(n) + " violates its support bound at " + to_string(x));
      }
    }
    for (const auto& x : L.annulus(fam.scale(n) + fam.scale(n - 1), fam.scale(n + 1) - fam.scale(n - 1))) {
      if (gn->at(x) != Rational(1)) {
        throw InvariantViolation("support", "cutoff g_" + std::to_string(n) + " is not 1 on its plateau at " + to_string(x));
      }
    }
    if (n + 2 <= n_max && fam.g[static_cast<std::size_t>(n + 1)]) {
      for (const auto& [x, v] : fam.g[static_cast<std::size_t>(n + 1)]->terms) {
        if (gn->terms.count(x)) throw InvariantViolation("disjoint", "cutoffs g_n and g_{n+2} overlap at " + to_string(x));
      }
    }
  }
  return fam;
}

int choose_N(const ScaleFamily& fam, double eps) {
  if (!(eps > 0.0)) throw UsageError("epsilon must be > 0");
  const double lhs0 = std::log(std::max(fam.C1, fam.C4));
  const double target = std::log(eps / 4.0);
  for (int N = 2; N < 100000; ++N) {
    if (lhs0 - 2.0 * N * std::log(fam.R) < target) return N;
  }
  throw UsageError("no admissible N found");
}

AnnulusBand band(const ScaleFamily& fam, int n) {
  AnnulusBand b;
  b.n = n;
  b.s = fam.scale(2 * n - 1) - fam.scale(2 * n - 3);
  b.t = fam.scale(2 * n) + fam.scale(2 * n - 1);
  b.r = fam.scale(2 * n - 1) / 6.0;
  return b;
}

bool band_conditions_hold(const ScaleFamily& fam, int n) {
  const AnnulusBand b = band(fam, n);
  return 3.0 * b.r < b.s && b.s - 2.0 * b.r >= fam.scale(2 * n - 2) + fam.scale(2 * n - 3) &&
         b.t + 2.0 * b.r <= fam.scale(2 * n + 1) - fam.scale(2 * n - 1);
}

Decomposition sharp_flat_decompose(const AlgebraElement& f, const ScaleFamily& fam, int N) {
  if (N < 2) throw UsageError("N must be >= 2");
  const LengthFunction& L = fam.L;
  Decomposition d;
  d.f = f;
  d.N = N;
  d.support_radius = fam.scale(2 * N) + fam.scale(2 * N - 1);
  d.support_ok = d.p_gap_ok = d.q_plateau_ok = true;
  std::vector<bool> band_hit;

  for (const auto& [x, c] : f.terms()) {
    const double l = L.length(x);
    Rational gsum(0);
    bool on_plateau = false;
    for (int n = N; fam.scale(2 * n) - fam.scale(2 * n - 1) < l; ++n) {
      gsum += fam.g_value(2 * n, x);
      if (fam.scale(2 * n) + fam.scale(2 * n - 1) < l && l <= fam.scale(2 * n + 1) - fam.scale(2 * n - 1)) {
        on_plateau = true;
      }
    }
    const Complex pv = gsum == Rational(1) ? c : boost::rational_cast<double>(gsum) * c;
    const Complex qv = c - pv;
    d.p.set(x, pv);
    d.q.set(x, qv);

    int in_band = 0;
    for (int n = N; band(fam, n).s < l; ++n) {
      if (l <= band(fam, n).t) {
        in_band = n;
        break;
      }
    }
    if (in_band) {
      d.rho.set(x, qv);
      if (band_hit.size() <= static_cast<std::size_t>(in_band)) band_hit.resize(static_cast<std::size_t>(in_band) + 1);
      band_hit[static_cast<std::size_t>(in_band)] = true;
    } else {
      d.flat.set(x, qv);
    }

    if (pv != Complex{} && l <= fam.scale(2 * N) - fam.scale(2 * N - 1)) d.p_gap_ok = false;
    if (on_plateau && qv != Complex{}) d.q_plateau_ok = false;
  }
  d.sharp = d.p + d.rho;
  for (const auto& [x, c] : d.flat.terms()) {
    if (L.length(x) > d.support_radius) d.support_ok = false;
  }
  d.max_drift = max_coeff_diff(d.f, d.sharp + d.flat);
  for (std::size_t n = 0; n < band_hit.size(); ++n) {
    if (band_hit[n]) d.bands.push_back(static_cast<int>(n));
  }
  return d;
}

}  // namespace qmetric
