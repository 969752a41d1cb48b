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

#include "core/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <unordered_map>

#include "core/errors.hpp"

namespace qmetric {

namespace {

using Triplet = Eigen::Triplet<Complex>;
using IndexMap = std::unordered_map<Element, Eigen::Index, ElementHash>;

IndexMap index_map(const std::vector<Element>& elems) {
  IndexMap m;
  m.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) m.emplace(elems[i], static_cast<Eigen::Index>(i));
  return m;
}

SparseMatrix assemble(std::size_t rows, std::size_t cols, const std::vector<Triplet>& t) {
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(t.begin(), t.end());
  m.prune(Complex{});
  return m;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::lambda: return "lambda";
    case Provenance::dirac: return "dirac";
    case Provenance::commutator: return "commutator";
    case Provenance::localized_block: return "localized-block";
    case Provenance::product: return "product";
  }
  return "unknown";
}

Complex TruncatedOperator::entry(const Element& x, const Element& y) const {
  auto i = std::find(rows.begin(), rows.end(), x);
  auto j = std::find(cols.begin(), cols.end(), y);
  if (i == rows.end() || j == cols.end()) throw UsageError("entry outside the index sets");
  return matrix.coeff(i - rows.begin(), j - cols.begin());
}

TruncatedOperator multiply(const TruncatedOperator& a, const TruncatedOperator& b) {
  if (a.cols != b.rows) throw UsageError("operator product needs matching index sets");
  TruncatedOperator out;
  out.provenance = Provenance::product;
  out.rows = a.rows;
  out.cols = b.cols;
  out.matrix = (a.matrix * b.matrix).pruned();
  return out;
}

void write_dense(std::ostream& os, const TruncatedOperator& T) {
  const Eigen::MatrixXcd d = T.dense();
  os << d.rows() << ' ' << d.cols() << ' ' << to_string(T.provenance) << '\n';
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j > 0) os << ' ';
      os << d(i, j).real() << ' ' << d(i, j).imag();
    }
    os << '\n';
  }
  os.precision(old);
}

TruncatedOperator lambda_matrix(const LengthFunction& L, const AlgebraElement& f,
                                const std::vector<Element>& domain,
                                const std::optional<std::vector<Element>>& codomain) {
  const Group& G = L.group();
  TruncatedOperator T;
  T.provenance = Provenance::lambda;
  T.cols = domain;
  T.rows = codomain ? *codomain : product_set(L, f, domain);
  const IndexMap rix = index_map(T.rows);
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    for (const auto& [s, c] : f.terms()) {
      auto it = rix.find(G.compose(s, domain[j]));
      if (it != rix.end()) trip.emplace_back(it->second, static_cast<Eigen::Index>(j), c);
    }
  }
  T.matrix = assemble(T.rows.size(), T.cols.size(), trip);
  return T;
}

TruncatedOperator dirac_matrix(const LengthFunction& L, const std::vector<Element>& elems) {
  TruncatedOperator T;
  T.provenance = Provenance::dirac;
  T.rows = elems;
  T.cols = elems;
  std::vector<Triplet> trip;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    trip.emplace_back(k, k, Complex{L.length(elems[i])});
  }
  T.matrix = assemble(elems.size(), elems.size(), trip);
  return T;
}

TruncatedOperator commutator_matrix(const LengthFunction& L, const AlgebraElement& f,
                                    const std::vector<Element>& domain) {
  const Group& G = L.group();
  TruncatedOperator T;
  T.provenance = Provenance::commutator;
  T.cols = domain;
  T.rows = product_set(L, f, domain);
  const IndexMap rix = index_map(T.rows);
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const double ly = L.length(domain[j]);
    for (const auto& [s, c] : f.terms()) {
      const Element x = G.compose(s, domain[j]);
      const Eigen::Index i = rix.at(x);
      trip.emplace_back(i, static_cast<Eigen::Index>(j), (L.length(x) - ly) * c);
    }
  }
  T.matrix = assemble(T.rows.size(), T.cols.size(), trip);
  return T;
}

TruncatedOperator compressed_commutator(const LengthFunction& L, const AlgebraElement& f, double r) {
  const Group& G = L.group();
  const BallPtr ball = L.ball(r);
  TruncatedOperator T;
  T.provenance = Provenance::commutator;
  T.rows = ball->elements();
  T.cols = ball->elements();
  const auto& lens = ball->lengths();
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < ball->size(); ++j) {
    for (const auto& [s, c] : f.terms()) {
      const auto i = ball->index_of(G.compose(s, T.cols[j]));
      if (i) trip.emplace_back(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j), (lens[*i] - lens[j]) * c);
    }
  }
  T.matrix = assemble(T.rows.size(), T.cols.size(), trip);
  return T;
}

double schur_bound(const SparseMatrix& A) {
  if (A.nonZeros() == 0) return 0.0;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(A.rows());
  double colmax = 0.0;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const double a = std::abs(it.value());
      col += a;
      row(it.row()) += a;
    }
    colmax = std::max(colmax, col);
  }
  return std::sqrt(colmax * row.maxCoeff());
}

SingularPair top_singular_pair(const SparseMatrix& A) {
  SingularPair out;
  out.u = Eigen::VectorXcd::Zero(A.rows());
  out.v = Eigen::VectorXcd::Zero(A.cols());
  if (A.nonZeros() == 0) return out;
  const bool right = A.cols() <= A.rows();
  const Eigen::MatrixXcd gram =
      right ? Eigen::MatrixXcd(SparseMatrix(A.adjoint() * A)) : Eigen::MatrixXcd(SparseMatrix(A * A.adjoint()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  const Eigen::Index top = gram.rows() - 1;
  out.sigma = std::sqrt(std::max(0.0, es.eigenvalues()(top)));
  if (out.sigma == 0.0) return out;
  if (right) {
    out.v = es.eigenvectors().col(top);
    out.u = A * out.v;
    out.u /= out.u.norm();
  } else {
    out.u = es.eigenvectors().col(top);
    out.v = A.adjoint() * out.u;
    out.v /= out.v.norm();
  }
  return out;
}

NormResult spectral_norm(const SparseMatrix& A, NormMethod method) {
  NormResult out;
  if (A.rows() == 0 || A.cols() == 0 || A.nonZeros() == 0) return out;
  const Eigen::Index small = std::min(A.rows(), A.cols());
  if (method == NormMethod::svd || (method == NormMethod::automatic && small <= kDenseNormLimit)) {
    const bool right = A.cols() <= A.rows();
    const Eigen::MatrixXcd gram =
        right ? Eigen::MatrixXcd(SparseMatrix(A.adjoint() * A)) : Eigen::MatrixXcd(SparseMatrix(A * A.adjoint()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
    out.value = std::sqrt(std::max(0.0, es.eigenvalues()(gram.rows() - 1)));
    return out;
  }

  out.exact = false;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
  v /= v.norm();
  double prev = 0.0;
  Eigen::VectorXcd w;
  for (int it = 1; it <= 10000; ++it) {
    const Eigen::VectorXcd av = A * v;
    const double sigma = av.norm();
    out.iterations = it;
    out.value = std::max(out.value, sigma);
    w = A.adjoint() * av;
    out.residual = (w - sigma * sigma * v).norm();
    const double wn = w.norm();
    if (wn == 0.0) break;
    if (it > 1 && std::abs(sigma - prev) <= 1e-12 * sigma) break;
    prev = sigma;
    v = w / wn;
  }
  return out;
}

NormResult operator_norm(const TruncatedOperator& T, NormMethod method) {
  return spectral_norm(T.matrix, method);
}

LocalizedBlock localized_block(const LengthFunction& L, const AlgebraElement& f, double r, double s) {
  if (!(s > r) || !(r >= 0.0)) throw UsageError("localized block needs s > r >= 0");
  const Group& G = L.group();
  const BallPtr ball = L.ball(r);
  std::vector<Element> rows;
  for (const auto& x : product_set(L, f, ball->elements())) {
    if (L.length(x) > s) rows.push_back(x);
  }
  LocalizedBlock out;
  out.op.provenance = Provenance::localized_block;
  out.op.rows = rows;
  out.op.cols = ball->elements();
  const IndexMap rix = index_map(rows);
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < ball->size(); ++j) {
    for (const auto& [a, c] : f.terms()) {
      auto it = rix.find(G.compose(a, ball->elements()[j]));
      if (it != rix.end()) trip.emplace_back(it->second, static_cast<Eigen::Index>(j), c);
    }
  }
  out.op.matrix = assemble(rows.size(), ball->size(), trip);
  out.norm = operator_norm(out.op).value;
  return out;
}

}  // namespace qmetric
