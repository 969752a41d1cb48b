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

#ifndef QMETRIC_CORE_SEMINORM_HPP
#define QMETRIC_CORE_SEMINORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/operators.hpp"

namespace qmetric {

enum class SeminormKind { lip, jd, operator_norm };
enum class Certificate { exact, lower_bound, upper_bound, bracketed };

std::string to_string(SeminormKind k);
std::string to_string(Certificate c);

struct TracePoint {
  double r = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct SeminormEstimate {
  SeminormKind kind = SeminormKind::lip;
  double value = 0.0;  // best available point value (the lower end of a bracket)
  double lower = 0.0;
  double upper = 0.0;
  Certificate certificate = Certificate::exact;
  std::vector<TracePoint> trace;
  double tolerance = 0.0;
  bool stabilized = false;  // last two lower bounds agree to 1e-9 relative
  // J_D only: the supremum is approached as r increases to `witness_r`
  // through the piece starting at `piece_lo`; attained only when J_D = 0.
  std::optional<double> witness_r;
  std::optional<double> piece_lo;
  bool attained = false;
};

// Bracket for L_D(f) = ||[D, lambda_f]||: lower bounds ||P_r [D, lambda_f] P_r||
// along the schedule (running max), upper bound sum |f(x)| L(x).
SeminormEstimate lipnorm_estimate(const LengthFunction& L, const AlgebraElement& f,
                                  const std::vector<double>& radii);

// L_D(delta_s) = sup_x |L(x) - L(s^-1 x)|, as a running max over B(r).
SeminormEstimate lipnorm_single_atom(const LengthFunction& L, const Element& s,
                                     const std::vector<double>& radii);

/// The block (I - M_{2r}) lambda_f M_r restricted to its nonzero rows and
/// columns, for r in the piece [lo, hi) of the breakpoint partition.
struct JdPiece {
  double lo = 0.0;
  double hi = 0.0;
  double r_eval = 0.0;
  std::vector<Element> rows;
  std::vector<Element> cols;
  SparseMatrix block;
  double schur = 0.0;
};

struct JdResult {
  double value = 0.0;
  std::size_t pieces = 0;
  std::size_t pieces_evaluated = 0;
  std::optional<JdPiece> argmax;  // piece realizing the value
  SingularPair pair;              // top singular pair of argmax->block
};

// Exact J_D(f) by breakpoint enumeration with Schur-bound pruning.
// `want_pair` also returns the top singular pair of the maximizing block.
JdResult jd_exact(const LengthFunction& L, const AlgebraElement& f, bool want_pair = false);

SeminormEstimate jd_seminorm(const LengthFunction& L, const AlgebraElement& f);

// For each atom t, D_t = u^* B(delta_t) v where B(delta_t) is the argmax
// block of `res` built from delta_t alone and (u, v) its top singular pair
// (requires want_pair). Moving f by c delta_t changes J_D at rate
// hi * Re(c D_t), so these values give a supergradient of J_D at f.
std::vector<Complex> jd_atom_gradients(const LengthFunction& L, const JdResult& res,
                                       const std::vector<Element>& atoms);

}  // namespace qmetric

#endif  // QMETRIC_CORE_SEMINORM_HPP
