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


#include <doctest.h>

#include <random>
#include <sstream>

#include "core/corpus.hpp"
#include "core/operators.hpp"

using namespace qmetric;

namespace {

const LengthFunction& Z() {
  static const LengthFunction L = LengthFunction::word(Group::free_abelian(1));
  return L;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("algebra basics") {
  const Group G = Group::free_abelian(1);
  AlgebraElement f = AlgebraElement::delta({1}, {2, 1});
  f.add({-2}, 3.0);
  const AlgebraElement fs = star(G, f);
  CHECK(fs.at({-1}) == Complex(2, -1));
  CHECK(fs.at({2}) == Complex(3, 0));
  CHECK(star(G, fs) == f);
  f.add({1}, Complex(-2, -1));
  CHECK(f.support_size() == 1);  // zero coefficients are dropped
  const AlgebraElement g = convolve(G, AlgebraElement::delta({1}), AlgebraElement::delta({2}, 3.0));
  CHECK(g == AlgebraElement::delta({3}, 3.0));
  CHECK(weighted_l1(Z(), f) == doctest::Approx(6.0));
}

TEST_CASE("convolution support stays inside the product set") {
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  CorpusOptions opt;
  opt.size = 20;
  opt.support_radius = 2;
  const auto fs = random_corpus(H, opt, 5);
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const AlgebraElement c = convolve(H.group(), fs[i], fs[i + 1]);
    const auto prod = product_set(H, fs[i], fs[i + 1].support());
    for (const auto& [x, v] : c.terms()) CHECK(std::binary_search(prod.begin(), prod.end(), x, [&](const Element& a, const Element& b) {
      return std::make_pair(H.length(a), a) < std::make_pair(H.length(b), b);
    }));
  }
}

TEST_CASE("lambda kernel of a shift") {
  const auto dom = Z().ball(2)->elements();
  const TruncatedOperator T = lambda_matrix(Z(), AlgebraElement::delta({1}), dom);
  CHECK(T.cols.size() == 5);
  CHECK(T.rows.size() == 5);
  for (const Element& x : T.rows) {
    for (const Element& y : T.cols) CHECK(T.entry(x, y) == Complex(x.code[0] - y.code[0] == 1 ? 1.0 : 0.0));
  }
  const TruncatedOperator I = lambda_matrix(Z(), AlgebraElement::delta({0}), dom);
  CHECK(I.dense().isApprox(Eigen::MatrixXcd::Identity(5, 5)));
}

TEST_CASE("lambda is multiplicative on padded index sets") {
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  CorpusOptions opt;
  opt.size = 6;
  opt.support_radius = 2;
  const auto fs = random_corpus(H, opt, 99);
  const auto dom = H.ball(3)->elements();
  for (std::size_t i = 0; i + 1 < fs.size(); i += 2) {
    const AlgebraElement& f = fs[i];
    const AlgebraElement& g = fs[i + 1];
    const TruncatedOperator Tg = lambda_matrix(H, g, dom);
    const TruncatedOperator Tf = lambda_matrix(H, f, Tg.rows);
    const TruncatedOperator Tfg = lambda_matrix(H, convolve(H.group(), f, g), dom, Tf.rows);
    const Eigen::MatrixXcd diff = multiply(Tf, Tg).dense() - Tfg.dense();
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("star is the adjoint on symmetric index sets") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  CorpusOptions opt;
  opt.size = 5;
  opt.support_radius = 3;
  for (const auto& f : random_corpus(Z2, opt, 4)) {
    const auto idx = Z2.ball(6)->elements();
    const TruncatedOperator A = lambda_matrix(Z2, f, idx, idx);
    const TruncatedOperator B = lambda_matrix(Z2, star(Z2.group(), f), idx, idx);
    CHECK((A.dense().adjoint() - B.dense()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("commutator kernel") {
  const auto dom = Z().ball(3)->elements();
  const TruncatedOperator C = commutator_matrix(Z(), AlgebraElement::delta({1}), dom);
  CHECK(C.entry({1}, {0}) == Complex(1));
  CHECK(C.entry({0}, {-1}) == Complex(-1));
  const TruncatedOperator E = commutator_matrix(Z(), AlgebraElement::delta({0}, 2.0), dom);
  CHECK(E.matrix.norm() == 0.0);
}

TEST_CASE("single-atom commutator factors as multiplier times translation") {
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  const Group& G = H.group();
  const Element s{1, -1, 2};
  const auto dom = H.ball(3)->elements();
  const TruncatedOperator C = commutator_matrix(H, AlgebraElement::delta(s), dom);
  for (const Element& y : dom) {
    const Element x = G.compose(s, y);
    const double phi = H.length(x) - H.length(G.compose(G.inverse(s), x));
    CHECK(C.entry(x, y).real() == phi);
    CHECK(std::abs(phi) <= H.length(s));
  }
}

TEST_CASE("operator norms") {
  SparseMatrix I(3, 3);
  I.setIdentity();
  CHECK(spectral_norm(I).value == doctest::Approx(1.0));
  SparseMatrix N(2, 2);
  N.insert(0, 1) = 2.0;
  CHECK(spectral_norm(N, NormMethod::svd).value == doctest::Approx(2.0));
  CHECK(spectral_norm(N, NormMethod::power).value == doctest::Approx(2.0));
  CHECK(spectral_norm(SparseMatrix(0, 0)).value == 0.0);
}

TEST_CASE("power iteration agrees with svd") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXcd M(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) M(i, j) = Complex(u(rng), u(rng));
    }
    const SparseMatrix S = M.sparseView();
    const double svd = spectral_norm(S, NormMethod::svd).value;
    const NormResult pw = spectral_norm(S, NormMethod::power);
    CHECK(std::abs(pw.value - svd) <= 1e-9);
    CHECK(schur_bound(S) >= svd - 1e-12);
  }
}

TEST_CASE("localized blocks") {
  const LocalizedBlock b = localized_block(Z(), AlgebraElement::delta({1}), 0.4, 0.9);
  CHECK(b.norm == doctest::Approx(1.0));
  CHECK(b.op.rows == std::vector<Element>{{1}});
  AlgebraElement f = AlgebraElement::delta({2}, 1.5);
  f.add({-1}, 2.0);
  CHECK(localized_block(Z(), f, 3, 5).norm == 0.0);
  CHECK(localized_block(Z(), AlgebraElement::delta({0}), 1, 2).norm == 0.0);
}

TEST_CASE("dense dump format") {
  const TruncatedOperator T = lambda_matrix(Z(), AlgebraElement::delta({1}, Complex(0, 1)), {{0}});
  std::ostringstream os;
  write_dense(os, T);
  CHECK(os.str() == "1 1 lambda\n0 1\n");
}

}  // TEST_SUITE
