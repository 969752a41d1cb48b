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

#ifndef QMETRIC_CORE_CUTOFF_HPP
#define QMETRIC_CORE_CUTOFF_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "core/algebra.hpp"

namespace qmetric {

using Rational = boost::rational<std::int64_t>;

/// Finitely supported rational-valued function, used for cutoffs so that
/// plateau values are exactly 1.
struct RationalFunction {
  std::map<Element, Rational> terms;

  Rational at(const Element& x) const;
  AlgebraElement to_algebra() const;
};

// g = h* * k with h = chi_{A(s,t)} and k = |B(r)|^-1 chi_{B(r)}, by exact
// convolution over A(s,t) x B(r). Requires t > s > 2r > 0.
RationalFunction smoothed_annulus_cutoff(const LengthFunction& L, double r, double s, double t);

// Single value of the same cutoff. Points where the triangle inequality
// already decides the value skip the count over B(r).
Rational cutoff_value(const LengthFunction& L, double r, double s, double t, const Element& x);

// (h* * k)(x) for h = chi_F, k = chi_E, i.e. |{y in E : x y^-1 in F}|.
std::int64_t set_cutoff_count(const Group& G, const std::vector<Element>& E,
                              const std::function<bool(const Element&)>& in_F, const Element& x);

/// Cutoffs g_n = h_n * k_n at scales R^n with R = 2^K, and the constants
/// derived from the doubling constant C.
struct ScaleFamily {
  explicit ScaleFamily(LengthFunction l) : L(std::move(l)) {}

  LengthFunction L;
  int K = 2;
  double R = 4.0;
  double C = 1.0;
  int n_max = 0;
  double C1 = 0.0;  // C^K
  double C2 = 0.0;  // 4 R C1
  double C3 = 0.0;  // C^(1 + log2(6R + 7))
  double C4 = 0.0;  // (1 + C2) C3
  // Range of radii on which C was checked against |B(2r)|/|B(r)|.
  double validated_lo = 1.0;
  double validated_hi = 1.0;
  double observed_ratio = 1.0;
  double observed_at = 1.0;
  // g_1..g_{n_max}; empty entries exceeded the ball cap.
  std::vector<std::optional<RationalFunction>> g;

  double scale(double n) const;  // R^n
  double g_r(int n) const { return scale(n - 1); }
  double g_s(int n) const { return scale(n); }
  double g_t(int n) const { return scale(n + 1); }
  Rational g_value(int n, const Element& x) const;
};

// Largest |B(2r)|/|B(r)| over r in [1, hi], shrinking hi by halves when the
// ball cap is hit; validated_hi = 0 when nothing could be checked.
struct ObservedDoubling {
  double ratio = 1.0;
  double at = 1.0;
  double validated_hi = 0.0;
};

ObservedDoubling observed_doubling(const LengthFunction& L, double hi);

// Throws UsageError when K < 2, C < 1, or the observed doubling ratio on the
// checked range exceeds C.
ScaleFamily build_scale_family(const LengthFunction& L, int K, int n_max, double C,
                               bool materialize = true);

// Least N >= 2 with R^(-2N) max(C1, C4) < eps / 4.
int choose_N(const ScaleFamily& fam, double eps);

struct AnnulusBand {
  int n = 0;
  double s = 0.0;  // R^(2n-1) - R^(2n-3)
  double t = 0.0;  // R^(2n) + R^(2n-1)
  double r = 0.0;  // R^(2n-1) / 6
};

AnnulusBand band(const ScaleFamily& fam, int n);

// 3r < s, s - 2r >= R^(2n-2) + R^(2n-3), t + 2r <= R^(2n+1) - R^(2n-1).
bool band_conditions_hold(const ScaleFamily& fam, int n);

struct Decomposition {
  AlgebraElement f;
  int N = 2;
  AlgebraElement p;      // sum_{n >= N} g_{2n} f
  AlgebraElement q;      // f - p
  AlgebraElement rho;    // q on the union of the bands A_n, n >= N
  AlgebraElement flat;   // f - p - rho
  AlgebraElement sharp;  // p + rho
  double support_radius = 0.0;  // R^(2N) + R^(2N-1)
  bool support_ok = false;
  bool p_gap_ok = false;      // supp p misses B(R^(2N) - R^(2N-1))
  bool q_plateau_ok = false;  // q vanishes on every plateau of g_{2n}
  double max_drift = 0.0;     // max |f - sharp - flat|
  std::vector<int> bands;     // n >= N with supp f meeting A_n
};

Decomposition sharp_flat_decompose(const AlgebraElement& f, const ScaleFamily& fam, int N);

}  // namespace qmetric

#endif  // QMETRIC_CORE_CUTOFF_HPP
