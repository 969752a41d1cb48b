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

#ifndef QMETRIC_CORE_VERIFY_HPP
#define QMETRIC_CORE_VERIFY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "core/cutoff.hpp"
#include "core/seminorm.hpp"

namespace qmetric {

// Direction in which a computed number approximates the true quantity.
enum class Side { exact, lower_bound, upper_bound, stabilized };
enum class RecordStatus { pass, fail, inconclusive };

std::string to_string(Side s);
std::string to_string(RecordStatus s);

/// One checked instance of an inequality lhs <= rhs (lhs < rhs when strict).
/// The comparison is rigorous when lhs is exact or a lower bound and rhs is
/// exact or an upper bound; any other pairing is tolerance-based.
struct InequalityRecord {
  std::string name;
  std::string citation;
  double lhs = 0.0;
  Side lhs_cert = Side::exact;
  double rhs = 0.0;
  Side rhs_cert = Side::exact;
  double margin = 0.0;  // rhs - lhs
  RecordStatus status = RecordStatus::inconclusive;
  bool rigorous = false;
  bool strict = false;
  std::string detail;
};

struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-12;
};

InequalityRecord compare(std::string name, std::string citation, double lhs, Side lhs_cert, double rhs,
                         Side rhs_cert, const Tolerance& tol = {}, bool strict = false);

struct InequalityReport {
  std::vector<InequalityRecord> records;

  std::size_t count(RecordStatus s) const;
  std::size_t rigorous_failures() const;
  // Citation anchors of failed rigorous records, in catalog order.
  std::vector<std::string> failed_citations() const;
};

struct VerifyOptions {
  // Operator-norm lower bounds use lambda_g M_rho with |B(rho)| at most this.
  std::size_t truncation_elements = 400;
  Tolerance tol;
};

// Runs the full record catalog for f against the family at level N.
InequalityReport verify_inequalities(const AlgebraElement& f, const ScaleFamily& fam, int N,
                                     const VerifyOptions& options = {});

// ||lambda_g M_rho|| with the exact codomain: a lower bound for ||lambda_g||.
double lambda_norm_lower(const LengthFunction& L, const AlgebraElement& g, double rho);

// Largest radius rho <= start with |B(rho)| <= max_elements (at least 0).
double truncation_radius(const LengthFunction& L, double start, std::size_t max_elements);

}  // namespace qmetric

#endif  // QMETRIC_CORE_VERIFY_HPP
