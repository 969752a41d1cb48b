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

#ifndef QMETRIC_CORE_OPERATORS_HPP
#define QMETRIC_CORE_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/algebra.hpp"

namespace qmetric {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

enum class Provenance { lambda, dirac, commutator, localized_block, product };

std::string to_string(Provenance p);

/// Finite block of an operator on l^2(G) between two element index sets.
/// Storage is sparse; `dense()` materializes it when a dense view is needed.
struct TruncatedOperator {
  Provenance provenance = Provenance::lambda;
  std::vector<Element> rows;
  std::vector<Element> cols;
  SparseMatrix matrix;

  Complex entry(const Element& x, const Element& y) const;
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
};

// a * b; requires a.cols == b.rows.
TruncatedOperator multiply(const TruncatedOperator& a, const TruncatedOperator& b);

// Header line "rows cols provenance", then one line per row of
// space-separated "re im" pairs.
void write_dense(std::ostream& os, const TruncatedOperator& T);

// Kernel f(x y^-1) with x in codomain and y in domain. Without a codomain the
// image set supp(f).domain is used, which makes the block exact.
TruncatedOperator lambda_matrix(const LengthFunction& L, const AlgebraElement& f,
                                const std::vector<Element>& domain,
                                const std::optional<std::vector<Element>>& codomain = std::nullopt);

// Diagonal of L on the given index set.
TruncatedOperator dirac_matrix(const LengthFunction& L, const std::vector<Element>& elems);

// Kernel (L(x) - L(y)) f(x y^-1) from `domain` into supp(f).domain.
TruncatedOperator commutator_matrix(const LengthFunction& L, const AlgebraElement& f,
                                    const std::vector<Element>& domain);

// P_r [D, lambda_f] P_r.
TruncatedOperator compressed_commutator(const LengthFunction& L, const AlgebraElement& f, double r);

enum class NormMethod { svd, power, automatic };

struct NormResult {
  double value = 0.0;
  bool exact = true;  // false: power-iteration lower bound
  int iterations = 0;
  double residual = 0.0;  // ||A*A v - value^2 v|| at the returned vector
};

inline constexpr long kDenseNormLimit = 2000;

// Largest singular value. `svd` diagonalizes the Gram matrix of the smaller
// side densely; `power` runs power iteration on A*A from a fixed seed until
// the relative change drops below 1e-12 or 10^4 iterations; `automatic`
// picks svd up to kDenseNormLimit.
NormResult spectral_norm(const SparseMatrix& A, NormMethod method = NormMethod::automatic);
NormResult operator_norm(const TruncatedOperator& T, NormMethod method = NormMethod::automatic);

struct SingularPair {
  double sigma = 0.0;
  Eigen::VectorXcd u;  // left, unit (zero when sigma = 0)
  Eigen::VectorXcd v;  // right, unit
};

// Top singular triple, computed densely.
SingularPair top_singular_pair(const SparseMatrix& A);

// sqrt(max column l1 * max row l1), an upper bound for the spectral norm.
double schur_bound(const SparseMatrix& A);

struct LocalizedBlock {
  TruncatedOperator op;
  double norm = 0.0;
};

// (I - M_s) lambda_f M_r: rows (supp(f).B(r)) \ B(s), columns B(r).
LocalizedBlock localized_block(const LengthFunction& L, const AlgebraElement& f, double r, double s);

}  // namespace qmetric

#endif  // QMETRIC_CORE_OPERATORS_HPP
