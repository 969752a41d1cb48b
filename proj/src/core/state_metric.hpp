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

#ifndef QMETRIC_CORE_STATE_METRIC_HPP
#define QMETRIC_CORE_STATE_METRIC_HPP

#include <string>
#include <vector>

#include "core/seminorm.hpp"

namespace qmetric {

enum class StateKind { trace, vector, mixture };

/// A state on the group algebra: the canonical trace, a vector state
/// f -> <lambda_f xi, xi> for a finitely supported unit vector xi, or a finite
/// convex combination of these.
struct State {
  StateKind kind = StateKind::trace;
  AlgebraElement xi;
  std::vector<double> weights;
  std::vector<State> parts;
  std::string label;

  static State trace();
  // Throws UsageError unless ||xi||_2 = 1 within 1e-12.
  static State vector(AlgebraElement xi, std::string label = {});
  // Throws UsageError unless weights are >= 0 and sum to 1 within 1e-12.
  static State mixture(std::vector<double> weights, std::vector<State> parts);
};

Complex state_eval(const Group& G, const State& mu, const AlgebraElement& f);
// mu(delta_s)
Complex state_atom(const Group& G, const State& mu, const Element& s);

enum class MetricConstraint { l1, jd };

std::string to_string(MetricConstraint c);

struct MetricBound {
  double value = 0.0;  // certified lower bound for the metric
  AlgebraElement f;    // optimizer, hermitian with f(e) = 0
  MetricConstraint constraint = MetricConstraint::l1;
  double radius = 0.0;
  std::vector<double> trace;  // best value after each iteration
  int iterations = 0;
  bool flagged = false;  // iteration cap reached before the value settled
  Element witness;       // atom realizing the initial bound
};

// max over s in B(cap) \ {e} of |mu(delta_s) - nu(delta_s)| / L(s), with the
// optimizing hermitian pair f normalized to sum |f| L = 1.
MetricBound atom_metric_lower_bound(const LengthFunction& L, const State& mu, const State& nu, double cap);

struct AscentOptions {
  int max_iterations = 500;
  double step = 1.0;  // step size at iteration k is step / sqrt(k)
};

// Projected supergradient ascent of Re(mu(f) - nu(f)) over hermitian f
// supported in B(radius) \ {e}, starting from the atom optimum.
MetricBound metric_ascent(const LengthFunction& L, const State& mu, const State& nu, double radius,
                          MetricConstraint constraint, const AscentOptions& options = {});

// Euclidean projection onto {sum_i w_i ||x_i|| <= 1}; blocks are the
// consecutive groups of `sizes[i]` coordinates.
// Independent re-check of a returned optimizer: f(e) = 0, f* = f, and the
// declared constraint holds (exact weighted l1 or exact J_D).
struct FeasibilityAudit {
  bool ok = false;
  double constraint_value = 0.0;
  double identity_coeff = 0.0;
  double hermitian_defect = 0.0;
};

FeasibilityAudit audit_feasibility(const LengthFunction& L, const MetricBound& mb, double tol = 1e-9);

Eigen::VectorXd project_group_l1(const Eigen::VectorXd& y, const std::vector<double>& w,
                                 const std::vector<int>& sizes);

}  // namespace qmetric

#endif  // QMETRIC_CORE_STATE_METRIC_HPP
