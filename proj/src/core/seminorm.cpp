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

#include "core/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "core/errors.hpp"

namespace qmetric {

std::string to_string(SeminormKind k) {
  switch (k) {
    case SeminormKind::lip: return "L_D";
    case SeminormKind::jd: return "J_D";
    case SeminormKind::operator_norm: return "operator-norm";
  }
  return "unknown";
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::exact: return "exact";
    case Certificate::lower_bound: return "lower-bound";
    case Certificate::upper_bound: return "upper-bound";
    case Certificate::bracketed: return "bracketed";
  }
  return "unknown";
}

namespace {

void check_schedule(const std::vector<double>& radii) {
  if (radii.empty()) throw UsageError("radius schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw UsageError("radius schedule must be nonnegative and increasing");
    }
  }
}

bool last_two_agree(const std::vector<TracePoint>& trace) {
  if (trace.size() < 2) return false;
  const double a = trace[trace.size() - 2].lower;
  const double b = trace.back().lower;
  return std::abs(b - a) <= 1e-9 * std::max(std::abs(b), 1e-300) || (a == 0.0 && b == 0.0);
}

struct Atom {
  Element s;
  Complex c;
  double len;
};

}  // namespace

SeminormEstimate lipnorm_estimate(const LengthFunction& L, const AlgebraElement& f,
                                  const std::vector<double>& radii) {
  check_schedule(radii);
  SeminormEstimate est;
  est.kind = SeminormKind::lip;
  est.upper = weighted_l1(L, f);
  est.tolerance = 1e-9;
  double best = 0.0;
  for (double r : radii) {
    const NormResult n = operator_norm(compressed_commutator(L, f, r));
    best = std::max(best, n.value);
    est.trace.push_back({r, best, est.upper});
  }
  est.lower = best;  // not clamped: a lower end above the upper end is a defect worth seeing
  est.value = est.lower;
  est.stabilized = last_two_agree(est.trace);
  est.certificate = est.upper == 0.0 ? Certificate::exact : Certificate::bracketed;
  return est;
}

SeminormEstimate lipnorm_single_atom(const LengthFunction& L, const Element& s,
                                     const std::vector<double>& radii) {
  check_schedule(radii);
  const Group& G = L.group();
  SeminormEstimate est;
  est.kind = SeminormKind::lip;
  const double cap = L.length(s);
  est.upper = cap;
  if (G.is_identity(s)) {
    est.certificate = Certificate::exact;
    est.trace.push_back({radii.back(), 0.0, 0.0});
    return est;
  }
  const Element sinv = G.inverse(s);
  double best = 0.0;
  for (double r : radii) {
    const BallPtr ball = L.ball(r);
    for (std::size_t i = 0; i < ball->size() && best < cap; ++i) {
      const double d = std::abs(ball->lengths()[i] - L.length(G.compose(sinv, ball->elements()[i])));
      best = std::max(best, d);
    }
    est.trace.push_back({r, best, cap});
  }
  est.lower = best;
  est.value = best;
  est.stabilized = last_two_agree(est.trace);
  est.certificate = best >= cap ? Certificate::exact : Certificate::lower_bound;
  return est;
}

JdResult jd_exact(const LengthFunction& L, const AlgebraElement& f, bool want_pair) {
  const Group& G = L.group();
  JdResult res;
  std::vector<Atom> atoms;
  double lmax = 0.0;
  for (const auto& [s, c] : f.terms()) {
    atoms.push_back({s, c, L.length(s)});
    lmax = std::max(lmax, atoms.back().len);
  }
  if (lmax == 0.0) return res;

  const std::vector<double> bps = L.breakpoints(lmax);
  std::vector<JdPiece> pieces;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    JdPiece p;
    p.lo = i == 0 ? 0.0 : bps[i - 1];
    p.hi = bps[i];
    p.r_eval = i == 0 ? bps[0] / 2.0 : bps[i - 1];
    const double r = p.r_eval;

    double active_max = 0.0;
    for (const auto& a : atoms) {
      if (a.len > r) active_max = std::max(active_max, a.len);
    }
    if (active_max == 0.0) continue;

    const BallPtr ball = L.ball(r);
    std::unordered_map<Element, Eigen::Index, ElementHash> rix;
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t j = ball->size(); j-- > 0;) {
      const double ly = ball->lengths()[j];
      if (!(ly > 2.0 * r - active_max)) break;  // ball is sorted by length
      const auto col = static_cast<Eigen::Index>(p.cols.size());
      bool used = false;
      for (const auto& a : atoms) {
        if (!(a.len > r) || !(a.len + ly > 2.0 * r)) continue;
        Element x = G.compose(a.s, ball->elements()[j]);
        if (!(L.length(x) > 2.0 * r)) continue;
        auto [it, fresh] = rix.try_emplace(x, static_cast<Eigen::Index>(p.rows.size()));
        if (fresh) p.rows.push_back(std::move(x));
        trip.emplace_back(it->second, col, a.c);
        used = true;
      }
      if (used) p.cols.push_back(ball->elements()[j]);
    }
    if (trip.empty()) continue;
    p.block.resize(static_cast<Eigen::Index>(p.rows.size()), static_cast<Eigen::Index>(p.cols.size()));
    p.block.setFromTriplets(trip.begin(), trip.end());
    p.block.prune(Complex{});
    p.schur = schur_bound(p.block);
    if (p.schur > 0.0) pieces.push_back(std::move(p));
  }
  res.pieces = bps.size();

  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pieces[a].hi * pieces[a].schur > pieces[b].hi * pieces[b].schur;
  });
  std::optional<std::size_t> best_piece;
  for (std::size_t k : order) {
    if (pieces[k].hi * pieces[k].schur <= res.value) break;
    ++res.pieces_evaluated;
    const double v = pieces[k].hi * spectral_norm(pieces[k].block).value;
    if (v > res.value) {
      res.value = v;
      best_piece = k;
    }
  }
  if (best_piece) {
    res.argmax = std::move(pieces[*best_piece]);
    if (want_pair) res.pair = top_singular_pair(res.argmax->block);
  }
  return res;
}

SeminormEstimate jd_seminorm(const LengthFunction& L, const AlgebraElement& f) {
  const JdResult r = jd_exact(L, f);
  SeminormEstimate est;
  est.kind = SeminormKind::jd;
  est.value = est.lower = est.upper = r.value;
  est.certificate = Certificate::exact;
  est.attained = r.value == 0.0;
  if (r.argmax) {
    est.witness_r = r.argmax->hi;
    est.piece_lo = r.argmax->lo;
  }
  return est;
}

std::vector<Complex> jd_atom_gradients(const LengthFunction& L, const JdResult& res,
                                       const std::vector<Element>& atoms) {
  std::vector<Complex> out(atoms.size());
  if (!res.argmax || res.pair.sigma == 0.0) return out;
  const JdPiece& p = *res.argmax;
  const Group& G = L.group();
  std::unordered_map<Element, Eigen::Index, ElementHash> rix;
  for (std::size_t i = 0; i < p.rows.size(); ++i) rix.emplace(p.rows[i], static_cast<Eigen::Index>(i));
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!(L.length(atoms[k]) > p.r_eval)) continue;
    Complex acc{};
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
      auto it = rix.find(G.compose(atoms[k], p.cols[j]));
      if (it != rix.end()) acc += std::conj(res.pair.u(it->second)) * res.pair.v(static_cast<Eigen::Index>(j));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace qmetric
