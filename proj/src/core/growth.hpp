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

#ifndef QMETRIC_CORE_GROWTH_HPP
#define QMETRIC_CORE_GROWTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/length.hpp"

namespace qmetric {

enum class GrowthProperty { strong_polynomial, bounded_doubling, polynomial };
enum class VerdictStatus { consistent, refuted, inconclusive };

std::string to_string(GrowthProperty p);
std::string to_string(VerdictStatus s);

// Verdicts only ever describe the sampled schedule: "consistent" means the
// data failed to refute the property, never that the property holds.
struct Verdict {
  GrowthProperty property;
  VerdictStatus status = VerdictStatus::inconclusive;
  std::optional<double> witness_r;
  double constant = 0.0;  // witnessed constant backing the verdict
  std::string reason;
};

struct GrowthRow {
  double r = 0.0;
  double log_size = 0.0;               // ln |B(r)|
  std::optional<std::uint64_t> size;   // |B(r)| when it fits in 64 bits
  std::optional<double> ratio;         // |B(2r)| / |B(r)|
  std::optional<double> exponent;      // ln|B(r)| / ln r, for r > 1
};

/// Heuristic thresholds for the finite-evidence verdicts.
///
/// polynomial        refuted at r once ln|B(r)|/ln r has risen by more than
///                   `exponent_rise` above its minimum over earlier radii.
/// bounded doubling  refuted at r when |B(2r)|/|B(r)| > 2^(d + doubling_slack)
///                   with d the fitted degree (clamped at 0).
/// strong polynomial refuted when the degrees fitted on the two halves of the
///                   fit window differ by more than `degree_drift` relative.
/// Refutations propagate upwards (polynomial -> doubling -> strong), which is
/// the contrapositive of strong => doubling => polynomial.
struct GrowthOptions {
  double fit_lo = 0.5;  // fit window as fractions of the schedule (by index)
  double fit_hi = 1.0;
  double exponent_rise = 1.0;
  double doubling_slack = 1.0;
  double degree_drift = 0.25;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double fitted_degree = 0.0;
  double max_ratio = 0.0;       // candidate C_L
  double max_ratio_r = 0.0;
  double min_scaled_size = 0.0;  // min of |B(r)| / r^d over r >= 1
  double max_scaled_size = 0.0;
  std::vector<Verdict> verdicts;  // strong, doubling, polynomial
  bool truncated = false;
  std::string truncation_reason;

  const Verdict& verdict(GrowthProperty p) const;
};

GrowthReport growth_table(const LengthFunction& L, const std::vector<double>& radii,
                          const GrowthOptions& options = {});

struct ChainCheck {
  bool pass = false;
  double log_lhs = 0.0;  // ln |B(r)|
  double log_rhs = 0.0;  // ln (C^(1 + log2(r/s)) |B(s)|)
};

// Checks |B(r)| <= C^(1 + log2(r/s)) |B(s)| for 1 <= s <= r.
ChainCheck doubling_chain_check(const LengthFunction& L, double s, double r, double C);

struct DoublingMax {
  double ratio = 1.0;
  double at = 0.0;
};

// Exact max of |B(2r)|/|B(r)| over r in [r_lo, r_hi]; the ratio is constant
// between consecutive breakpoints, so only those radii are evaluated.
DoublingMax max_doubling_ratio(const LengthFunction& L, double r_lo, double r_hi);

struct OscillationEstimate {
  double limsup = 0.0;
  double liminf = 0.0;
  std::vector<double> radii;
  std::vector<double> exponents;  // ln|B(r)|/ln r along the schedule
};

// Running extremes of ln|B(r)|/ln r over the last `tail_fraction` of the
// schedule (radii must be >= 2).
OscillationEstimate oscillation_probe(const LengthFunction& L, const std::vector<double>& radii,
                                      double tail_fraction = 0.5);

std::vector<double> linear_schedule(double from, double to, double step);
std::vector<double> geometric_schedule(double from, double to, double factor);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qmetric

#endif  // QMETRIC_CORE_GROWTH_HPP
