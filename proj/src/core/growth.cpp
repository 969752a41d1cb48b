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

#include "core/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace qmetric {

std::string to_string(GrowthProperty p) {
  switch (p) {
    case GrowthProperty::strong_polynomial: return "strong-polynomial";
    case GrowthProperty::bounded_doubling: return "bounded-doubling";
    case GrowthProperty::polynomial: return "polynomial";
  }
  return "unknown";
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::consistent: return "consistent";
    case VerdictStatus::refuted: return "refuted";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const Verdict& GrowthReport::verdict(GrowthProperty p) const {
  for (const auto& v : verdicts) {
    if (v.property == p) return v;
  }
  throw UsageError("growth report has no verdict for " + to_string(p));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

namespace {

double fit_rows(const std::vector<GrowthRow>& rows, std::size_t lo, std::size_t hi) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = lo; i < hi && i < rows.size(); ++i) {
    x.push_back(std::log(rows[i].r));
    y.push_back(rows[i].log_size);
  }
  return fit_slope(x, y);
}

}  // namespace

GrowthReport growth_table(const LengthFunction& L, const std::vector<double>& radii,
                          const GrowthOptions& options) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 1.0) || !std::isfinite(radii[i])) {
      throw UsageError("growth radii must be finite and >= 1");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) throw UsageError("growth radii must increase");
  }

  GrowthReport rep;
  for (double r : radii) {
    GrowthRow row;
    row.r = r;
    try {
      row.log_size = L.log_ball_count(r);
      try {
        row.size = L.ball_count(r);
      } catch (const OverflowError&) {
      }
      try {
        row.ratio = std::exp(L.log_ball_count(2.0 * r) - row.log_size);
        if (row.size) {
          try {
            row.ratio = static_cast<double>(L.ball_count(2.0 * r)) / static_cast<double>(*row.size);
          } catch (const OverflowError&) {
          }
        }
      } catch (const CapExceeded&) {
      } catch (const UsageError&) {
        // 2r lies beyond the materialized part of the group
      }
    } catch (const CapExceeded& e) {
      rep.truncated = true;
      rep.truncation_reason = e.what();
      break;
    }
    if (r > 1.0) row.exponent = row.log_size / std::log(r);
    rep.rows.push_back(row);
  }

  const std::size_t n = rep.rows.size();
  const auto lo = static_cast<std::size_t>(std::floor(options.fit_lo * static_cast<double>(n)));
  const auto hi = static_cast<std::size_t>(std::ceil(options.fit_hi * static_cast<double>(n)));
  rep.fitted_degree = fit_rows(rep.rows, std::min(lo, n > 2 ? n - 2 : 0), hi);
  const double d = std::isfinite(rep.fitted_degree) ? rep.fitted_degree : 0.0;

  rep.min_scaled_size = std::numeric_limits<double>::infinity();
  rep.max_scaled_size = 0.0;
  for (const auto& row : rep.rows) {
    const double scaled = std::exp(row.log_size - d * std::log(row.r));
    rep.min_scaled_size = std::min(rep.min_scaled_size, scaled);
    rep.max_scaled_size = std::max(rep.max_scaled_size, scaled);
    if (row.ratio && *row.ratio > rep.max_ratio) {
      rep.max_ratio = *row.ratio;
      rep.max_ratio_r = row.r;
    }
  }
  if (n == 0) rep.min_scaled_size = 0.0;

  // polynomial
  Verdict poly;
  poly.property = GrowthProperty::polynomial;
  {
    double min_e = std::numeric_limits<double>::infinity();
    double max_e = 0.0;
    bool any = false;
    for (const auto& row : rep.rows) {
      if (!row.exponent) continue;
      any = true;
      max_e = std::max(max_e, *row.exponent);
      if (*row.exponent - min_e > options.exponent_rise && poly.status != VerdictStatus::refuted) {
        poly.status = VerdictStatus::refuted;
        poly.witness_r = row.r;
        std::ostringstream os;
        os << "growth exponent rose from " << min_e << " to " << *row.exponent;
        poly.reason = os.str();
      }
      min_e = std::min(min_e, *row.exponent);
    }
    poly.constant = max_e;
    if (poly.status != VerdictStatus::refuted) {
      poly.status = any ? VerdictStatus::consistent : VerdictStatus::inconclusive;
      poly.reason = any ? "growth exponent stayed bounded on the schedule" : "no radii above 1";
    }
  }

  // bounded doubling
  Verdict doubling;
  doubling.property = GrowthProperty::bounded_doubling;
  {
    const double threshold = std::exp2(std::max(d, 0.0) + options.doubling_slack);
    bool any = false;
    for (const auto& row : rep.rows) {
      if (!row.ratio) continue;
      any = true;
      if (*row.ratio > threshold) {
        doubling.status = VerdictStatus::refuted;
        doubling.witness_r = row.r;
        doubling.constant = *row.ratio;
        std::ostringstream os;
        os << "doubling ratio " << *row.ratio << " exceeds 2^(d+" << options.doubling_slack
           << ") = " << threshold;
        doubling.reason = os.str();
        break;
      }
    }
    if (doubling.status != VerdictStatus::refuted) {
      doubling.status = any ? VerdictStatus::consistent : VerdictStatus::inconclusive;
      doubling.constant = rep.max_ratio;
      doubling.witness_r = any ? std::optional<double>(rep.max_ratio_r) : std::nullopt;
      doubling.reason = any ? "max doubling ratio attained at witness radius" : "no doubling ratios";
    }
  }

  // strong polynomial
  Verdict strong;
  strong.property = GrowthProperty::strong_polynomial;
  {
    const std::size_t wlo = std::min(lo, n);
    const std::size_t whi = std::min(hi, n);
    const std::size_t mid = wlo + (whi - wlo) / 2;
    const double d_a = fit_rows(rep.rows, wlo, mid + 1);
    const double d_b = fit_rows(rep.rows, mid, whi);
    strong.constant = std::max(rep.max_scaled_size, rep.min_scaled_size > 0.0 ? 1.0 / rep.min_scaled_size : 0.0);
    if (!std::isfinite(d_a) || !std::isfinite(d_b)) {
      strong.status = VerdictStatus::inconclusive;
      strong.reason = "fit window too short";
    } else {
      const double scale = std::max(std::abs(d_a), std::abs(d_b));
      std::ostringstream os;
      os << "fitted degree " << d_a << " on the lower half of the window, " << d_b << " on the upper";
      strong.reason = os.str();
      if (std::abs(d_b - d_a) > options.degree_drift * scale && std::abs(d_b - d_a) > 1e-9) {
        strong.status = VerdictStatus::refuted;
        strong.witness_r = rep.rows[whi - 1].r;
      } else {
        strong.status = VerdictStatus::consistent;
      }
    }
  }

  if (poly.status == VerdictStatus::refuted && doubling.status != VerdictStatus::refuted) {
    doubling.status = VerdictStatus::refuted;
    doubling.witness_r = poly.witness_r;
    doubling.reason = "implied by the polynomial-growth refutation";
  }
  if (doubling.status == VerdictStatus::refuted && strong.status != VerdictStatus::refuted) {
    strong.status = VerdictStatus::refuted;
    strong.witness_r = doubling.witness_r;
    strong.reason = "implied by the bounded-doubling refutation";
  }
  if (rep.truncated) {
    for (Verdict* v : {&strong, &doubling, &poly}) {
      if (v->status != VerdictStatus::refuted) {
        v->status = VerdictStatus::inconclusive;
        v->reason = "schedule truncated: " + rep.truncation_reason;
      }
    }
  }
  rep.verdicts = {strong, doubling, poly};
  return rep;
}

ChainCheck doubling_chain_check(const LengthFunction& L, double s, double r, double C) {
  if (!(s >= 1.0) || !(r >= s)) throw UsageError("doubling chain needs 1 <= s <= r");
  if (!(C >= 1.0)) throw UsageError("doubling constant must be >= 1");
  ChainCheck out;
  out.log_lhs = L.log_ball_count(r);
  out.log_rhs = (1.0 + std::log2(r / s)) * std::log(C) + L.log_ball_count(s);
  out.pass = out.log_lhs <= out.log_rhs + 1e-12 * std::max(1.0, std::abs(out.log_rhs));
  return out;
}

DoublingMax max_doubling_ratio(const LengthFunction& L, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo)) throw UsageError("doubling range needs 0 < r_lo <= r_hi");
  std::vector<double> pts{r_lo};
  for (double w : L.breakpoints(r_hi)) {
    if (w > r_lo) pts.push_back(w);
  }
  DoublingMax best{0.0, r_lo};
  for (double r : pts) {
    const double ratio = std::exp(L.log_ball_count(2.0 * r) - L.log_ball_count(r));
    double exact = ratio;
    try {
      exact = static_cast<double>(L.ball_count(2.0 * r)) / static_cast<double>(L.ball_count(r));
    } catch (const OverflowError&) {
    }
    if (exact > best.ratio) best = {exact, r};
  }
  return best;
}

OscillationEstimate oscillation_probe(const LengthFunction& L, const std::vector<double>& radii,
                                      double tail_fraction) {
  if (radii.empty()) throw UsageError("oscillation probe needs radii");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw UsageError("tail fraction must be in (0, 1]");
  OscillationEstimate out;
  for (double r : radii) {
    if (!(r >= 2.0)) throw UsageError("oscillation probe radii must be >= 2");
    out.radii.push_back(r);
    out.exponents.push_back(L.log_ball_count(r) / std::log(r));
  }
  const auto n = out.exponents.size();
  const auto start = n - std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))));
  out.limsup = *std::max_element(out.exponents.begin() + static_cast<std::ptrdiff_t>(start), out.exponents.end());
  out.liminf = *std::min_element(out.exponents.begin() + static_cast<std::ptrdiff_t>(start), out.exponents.end());
  return out;
}

std::vector<double> linear_schedule(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) throw UsageError("linear schedule needs step > 0 and to >= from");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

std::vector<double> geometric_schedule(double from, double to, double factor) {
  if (!(factor > 1.0) || !(from > 0.0) || !(to >= from)) {
    throw UsageError("geometric schedule needs factor > 1 and 0 < from <= to");
  }
  std::vector<double> out;
  for (double r = from; r <= to * (1.0 + 1e-12); r *= factor) out.push_back(r);
  return out;
}

}  // namespace qmetric
