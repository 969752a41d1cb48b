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

#include "core/state_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "core/errors.hpp"

namespace qmetric {

State State::trace() {
  State s;
  s.kind = StateKind::trace;
  s.label = "trace";
  return s;
}

State State::vector(AlgebraElement xi, std::string label) {
  if (std::abs(xi.norm2() - 1.0) > 1e-12) throw UsageError("vector state needs a unit vector");
  State s;
  s.kind = StateKind::vector;
  s.xi = std::move(xi);
  s.label = label.empty() ? "vector" : std::move(label);
  return s;
}

State State::mixture(std::vector<double> weights, std::vector<State> parts) {
  if (weights.size() != parts.size() || weights.empty()) throw UsageError("mixture needs one weight per part");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw UsageError("mixture weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw UsageError("mixture weights must sum to 1");
  State s;
  s.kind = StateKind::mixture;
  s.weights = std::move(weights);
  s.parts = std::move(parts);
  s.label = "mixture";
  return s;
}

Complex state_atom(const Group& G, const State& mu, const Element& s) {
  switch (mu.kind) {
    case StateKind::trace:
      return G.is_identity(s) ? 1.0 : 0.0;
    case StateKind::vector: {
      // <lambda_s xi, xi> = sum_y xi(y) conj(xi(s y))
      Complex acc{};
      for (const auto& [y, c] : mu.xi.terms()) acc += c * std::conj(mu.xi.at(G.compose(s, y)));
      return acc;
    }
    case StateKind::mixture: {
      Complex acc{};
      for (std::size_t i = 0; i < mu.parts.size(); ++i) acc += mu.weights[i] * state_atom(G, mu.parts[i], s);
      return acc;
    }
  }
  return {};
}

Complex state_eval(const Group& G, const State& mu, const AlgebraElement& f) {
  Complex acc{};
  for (const auto& [s, c] : f.terms()) acc += c * state_atom(G, mu, s);
  return acc;
}

std::string to_string(MetricConstraint c) { return c == MetricConstraint::l1 ? "l1" : "jd"; }

Eigen::VectorXd project_group_l1(const Eigen::VectorXd& y, const std::vector<double>& w,
                                 const std::vector<int>& sizes) {
  const std::size_t n = w.size();
  std::vector<double> norms(n);
  double total = 0.0;
  for (std::size_t i = 0, off = 0; i < n; off += static_cast<std::size_t>(sizes[i]), ++i) {
    norms[i] = y.segment(static_cast<Eigen::Index>(off), sizes[i]).norm();
    total += w[i] * norms[i];
  }
  if (total <= 1.0) return y;
  // shrink every block by theta * w_i; find theta with sum w_i (|y_i| - theta w_i)_+ = 1
  auto mass = [&](double theta) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += w[i] * std::max(0.0, norms[i] - theta * w[i]);
    return m;
  };
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, norms[i] / w[i]);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(y.size());
  for (std::size_t i = 0, off = 0; i < n; off += static_cast<std::size_t>(sizes[i]), ++i) {
    if (norms[i] > hi * w[i]) {
      const double keep = 1.0 - hi * w[i] / norms[i];
      x.segment(static_cast<Eigen::Index>(off), sizes[i]) = keep * y.segment(static_cast<Eigen::Index>(off), sizes[i]);
    }
  }
  return x;
}

namespace {

// Hermitian functions on B(radius) \ {e}, parametrized per orbit {s, s^-1}:
// two real coordinates (f(s) = a + ib, f(s^-1) = a - ib) or one when s = s^-1.
struct Slice {
  std::vector<Element> reps;
  std::vector<Element> invs;
  std::vector<int> sizes;
  std::vector<double> lengths;
  std::vector<double> weights;  // contribution to sum |f| L per unit block norm
  std::vector<Complex> delta;   // mu(delta_s) - nu(delta_s)
  Eigen::VectorXd grad;         // gradient of Re(mu(f) - nu(f))

  Eigen::Index dim() const { return grad.size(); }

  AlgebraElement to_f(const Eigen::VectorXd& x) const {
    AlgebraElement f;
    Eigen::Index off = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (sizes[i] == 1) {
        f.set(reps[i], x(off));
      } else {
        f.set(reps[i], Complex(x(off), x(off + 1)));
        f.set(invs[i], Complex(x(off), -x(off + 1)));
      }
      off += sizes[i];
    }
    return f;
  }
};

Slice make_slice(const LengthFunction& L, const State& mu, const State& nu, double radius) {
  const Group& G = L.group();
  Slice sl;
  const BallPtr ball = L.ball(radius);
  std::unordered_set<Element, ElementHash> seen;
  std::vector<double> g;
  for (std::size_t i = 1; i < ball->size(); ++i) {
    const Element& s = ball->elements()[i];
    if (seen.count(s)) continue;
    Element inv = G.inverse(s);
    seen.insert(s);
    seen.insert(inv);
    const Complex d = state_atom(G, mu, s) - state_atom(G, nu, s);
    const double l = ball->lengths()[i];
    sl.reps.push_back(s);
    sl.lengths.push_back(l);
    sl.delta.push_back(d);
    if (inv == s) {
      sl.sizes.push_back(1);
      sl.weights.push_back(l);
      g.push_back(d.real());
    } else {
      sl.sizes.push_back(2);
      sl.weights.push_back(2.0 * l);
      g.push_back(2.0 * d.real());
      g.push_back(-2.0 * d.imag());
    }
    sl.invs.push_back(std::move(inv));
  }
  sl.grad = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
  return sl;
}

// Atom optimum over the weighted l1 ball: the orbit with the largest
// |delta| / L and the pair reaching it.
MetricBound atom_optimum(const Slice& sl, Eigen::VectorXd& x) {
  MetricBound mb;
  x = Eigen::VectorXd::Zero(sl.dim());
  std::size_t best = sl.reps.size();
  double best_v = 0.0;
  for (std::size_t i = 0; i < sl.reps.size(); ++i) {
    const double v = std::abs(sl.delta[i]) / sl.lengths[i];
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best == sl.reps.size()) return mb;
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < best; ++i) off += sl.sizes[i];
  const Complex d = sl.delta[best];
  const double l = sl.lengths[best];
  if (sl.sizes[best] == 1) {
    x(off) = (d.real() >= 0.0 ? 1.0 : -1.0) / l;
  } else {
    const Complex c = std::conj(d) / (2.0 * std::abs(d) * l);
    x(off) = c.real();
    x(off + 1) = c.imag();
  }
  mb.value = best_v;
  mb.witness = sl.reps[best];
  mb.f = sl.to_f(x);
  return mb;
}

}  // namespace

MetricBound atom_metric_lower_bound(const LengthFunction& L, const State& mu, const State& nu, double cap) {
  const Slice sl = make_slice(L, mu, nu, cap);
  Eigen::VectorXd x;
  MetricBound mb = atom_optimum(sl, x);
  mb.constraint = MetricConstraint::l1;
  mb.radius = cap;
  return mb;
}

MetricBound metric_ascent(const LengthFunction& L, const State& mu, const State& nu, double radius,
                          MetricConstraint constraint, const AscentOptions& options) {
  const Slice sl = make_slice(L, mu, nu, radius);
  Eigen::VectorXd x;
  MetricBound best = atom_optimum(sl, x);
  best.constraint = constraint;
  best.radius = radius;
  if (best.value == 0.0) return best;  // mu and nu agree on every atom of the slice

  const int stall_limit = 50;
  int stall = 0;
  auto improve = [&](double v, const Eigen::VectorXd& xv) {
    // gains under 1e-9 relative are kept but count toward the stall limit
    if (v > best.value) {
      stall = v > best.value * (1.0 + 1e-9) ? 0 : stall + 1;
      best.value = v;
      best.f = sl.to_f(xv);
    } else {
      ++stall;
    }
  };

  // weighted l1 ball first; its optimizer also seeds the J_D ascent, being
  // feasible there (J_D <= L_D <= weighted l1)
  bool l1_capped = true;
  for (int k = 1; k <= options.max_iterations; ++k) {
    const Eigen::VectorXd next = project_group_l1(x + options.step / std::sqrt(k) * sl.grad, sl.weights, sl.sizes);
    const bool fixed = (next - x).norm() <= 1e-15 * std::max(1.0, x.norm());
    x = next;
    improve(sl.grad.dot(x), x);
    best.trace.push_back(best.value);
    best.iterations = k;
    if (fixed || stall >= stall_limit) {
      l1_capped = false;
      break;
    }
  }
  if (constraint == MetricConstraint::l1) {
    best.flagged = l1_capped;
    return best;
  }
  x = Eigen::VectorXd::Zero(sl.dim());
  for (std::size_t i = 0, off = 0; i < sl.reps.size(); off += static_cast<std::size_t>(sl.sizes[i]), ++i) {
    const Complex c = best.f.at(sl.reps[i]);
    x(static_cast<Eigen::Index>(off)) = c.real();
    if (sl.sizes[i] == 2) x(static_cast<Eigen::Index>(off + 1)) = c.imag();
  }
  stall = 0;
  const int l1_iterations = best.iterations;

  // J_D ball: ascend phi / J_D along the unit sphere of J_D
  std::vector<Element> atoms;
  for (std::size_t i = 0; i < sl.reps.size(); ++i) {
    atoms.push_back(sl.reps[i]);
    atoms.push_back(sl.invs[i]);
  }
  const double shrink = 1.0 - 1e-12;
  JdResult res = jd_exact(L, sl.to_f(x), true);
  x *= shrink / res.value;
  improve(sl.grad.dot(x), x);
  for (int k = 1; k <= options.max_iterations; ++k) {
    res = jd_exact(L, sl.to_f(x), true);
    const double J = res.value;
    if (!(J > 0.0) || !res.argmax) break;
    const double phi = sl.grad.dot(x);
    const std::vector<Complex> D = jd_atom_gradients(L, res, atoms);
    const double w = res.argmax->hi;
    Eigen::VectorXd gJ(sl.dim());
    Eigen::Index off = 0;
    for (std::size_t i = 0; i < sl.reps.size(); ++i) {
      const Complex ds = D[2 * i];
      const Complex di = D[2 * i + 1];
      if (sl.sizes[i] == 1) {
        gJ(off) = w * ds.real();
      } else {
        gJ(off) = w * (ds + di).real();
        gJ(off + 1) = w * (Complex(0, 1) * ds - Complex(0, 1) * di).real();
      }
      off += sl.sizes[i];
    }
    const Eigen::VectorXd g = (sl.grad * J - phi * gJ) / (J * J);
    const double gn = g.norm();
    if (gn == 0.0) break;
    Eigen::VectorXd y = x + (options.step / std::sqrt(k)) * x.norm() * g / gn;
    const double Jy = jd_exact(L, sl.to_f(y)).value;
    if (!(Jy > 0.0)) break;
    x = y * (shrink / Jy);
    improve(sl.grad.dot(x), x);
    best.trace.push_back(best.value);
    best.iterations = l1_iterations + k;
    if (stall >= stall_limit) return best;
    if (k == options.max_iterations) best.flagged = true;
  }
  return best;
}

FeasibilityAudit audit_feasibility(const LengthFunction& L, const MetricBound& mb, double tol) {
  FeasibilityAudit a;
  const Group& G = L.group();
  a.identity_coeff = std::abs(mb.f.at(G.identity()));
  a.hermitian_defect = max_coeff_diff(mb.f, star(G, mb.f));
  a.constraint_value = mb.constraint == MetricConstraint::l1 ? weighted_l1(L, mb.f) : jd_exact(L, mb.f).value;
  a.ok = a.identity_coeff == 0.0 && a.hermitian_defect <= tol && a.constraint_value <= 1.0 + tol;
  return a;
}

}  // namespace qmetric
