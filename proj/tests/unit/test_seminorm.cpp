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

#include <cmath>

#include "core/corpus.hpp"
#include "core/growth.hpp"
#include "core/seminorm.hpp"

using namespace qmetric;

namespace {

const LengthFunction& Z() {
  static const LengthFunction L = LengthFunction::word(Group::free_abelian(1));
  return L;
}

// r * ||(I - M_2r) lambda_f M_r|| sampled on a uniform grid, built from raw
// kernels rather than the piecewise machinery under test.
double jd_grid(const LengthFunction& L, const AlgebraElement& f, double hi, int points) {
  double best = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double r = hi * i / points;
    const auto dom = L.ball(r)->elements();
    const TruncatedOperator T = lambda_matrix(L, f, dom);
    Eigen::MatrixXcd M = T.dense();
    for (std::size_t row = 0; row < T.rows.size(); ++row) {
      if (L.length(T.rows[row]) <= 2 * r) M.row(static_cast<Eigen::Index>(row)).setZero();
    }
    const double n = M.size() ? Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0) : 0.0;
    best = std::max(best, r * n);
  }
  return best;
}

}  // namespace

TEST_SUITE("seminorm") {

TEST_CASE("J_D exact values on Z") {
  CHECK(jd_exact(Z(), AlgebraElement::delta({0})).value == 0.0);
  CHECK(jd_exact(Z(), AlgebraElement::delta({1})).value == doctest::Approx(0.5).epsilon(1e-14));
  AlgebraElement f = AlgebraElement::delta({1});
  f.add({-1}, 1.0);
  const SeminormEstimate e = jd_seminorm(Z(), f);
  CHECK(std::abs(e.value - std::sqrt(0.5)) <= 1e-12);
  CHECK_FALSE(e.attained);
  REQUIRE(e.witness_r.has_value());
  CHECK(*e.witness_r == 0.5);
}

TEST_CASE("J_D agrees with a dense radius scan") {
  AlgebraElement f = AlgebraElement::delta({1});
  f.add({-1}, 1.0);
  const double grid = jd_grid(Z(), f, 2.0, 1000);
  // the sup is approached from below, so a grid lands within one step of it
  CHECK(grid <= jd_exact(Z(), f).value + 1e-12);
  CHECK(grid >= jd_exact(Z(), f).value - 2.0 * std::sqrt(2.0) / 1000);
}

TEST_CASE("J_D is positive off the identity") {
  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  CorpusOptions opt;
  opt.size = 100;
  opt.support_radius = 5;
  opt.allow_identity = false;
  for (const auto& f : random_corpus(Z2, opt, 31)) {
    const double J = jd_exact(Z2, f).value;
    CHECK(J > 0.0);
    CHECK(J <= weighted_l1(Z2, f) + 1e-12);
  }
}

TEST_CASE("J_D ignores the identity coefficient and is homogeneous") {
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  AlgebraElement f = AlgebraElement::delta({1, 0, 0}, Complex(1, 2));
  f.add({0, 1, 1}, -0.5);
  const double J = jd_exact(H, f).value;
  AlgebraElement g = f;
  g.add({0, 0, 0}, 7.0);
  CHECK(jd_exact(H, g).value == doctest::Approx(J).epsilon(1e-13));
  CHECK(jd_exact(H, Complex(0, -3) * f).value == doctest::Approx(3 * J).epsilon(1e-13));
}

TEST_CASE("L_D brackets") {
  const SeminormEstimate d1 = lipnorm_estimate(Z(), AlgebraElement::delta({1}), linear_schedule(1, 4, 1));
  CHECK(d1.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d1.upper == 1.0);
  CHECK(d1.lower <= d1.upper);
  for (std::size_t i = 1; i < d1.trace.size(); ++i) CHECK(d1.trace[i].lower >= d1.trace[i - 1].lower);

  const SeminormEstimate e = lipnorm_estimate(Z(), AlgebraElement::delta({0}, 4.0), linear_schedule(1, 3, 1));
  CHECK(e.upper == 0.0);
  CHECK(e.lower == 0.0);

  const LengthFunction Z2 = LengthFunction::word(Group::free_abelian(2));
  const SeminormEstimate z2 = lipnorm_estimate(Z2, AlgebraElement::delta({1, 0}), linear_schedule(1, 4, 1));
  CHECK(z2.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(z2.upper == 1.0);
}

TEST_CASE("single-atom L_D") {
  const auto radii = linear_schedule(1, 6, 1);
  const SeminormEstimate z = lipnorm_single_atom(Z(), {1}, radii);
  CHECK(z.value == 1.0);
  CHECK(z.certificate == Certificate::exact);
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  const SeminormEstimate h = lipnorm_single_atom(H, {1, 0, 0}, radii);
  CHECK(h.value == 1.0);
  CHECK(h.certificate == Certificate::exact);
  const SeminormEstimate c = lipnorm_single_atom(H, {0, 0, 1}, radii);
  CHECK(c.value == 4.0);
  CHECK(lipnorm_single_atom(H, {0, 0, 0}, radii).value == 0.0);
}

TEST_CASE("J_D stays below stabilized L_D lower bounds") {
  CorpusOptions opt;
  opt.size = 25;
  opt.support_radius = 4;
  for (const auto& f : random_corpus(Z(), opt, 12)) {
    const SeminormEstimate ld = lipnorm_estimate(Z(), f, linear_schedule(4, 40, 4));
    const double J = jd_exact(Z(), f).value;
    CHECK(J <= ld.upper + 1e-12);
    if (ld.stabilized) CHECK(J <= ld.lower + 1e-6);
  }
}

TEST_CASE("weight inequality on localized blocks") {
  const LengthFunction H = LengthFunction::word(Group::heisenberg());
  CorpusOptions opt;
  opt.size = 20;
  opt.support_radius = 3;
  for (const auto& f : random_corpus(H, opt, 77)) {
    const double upper = weighted_l1(H, f);
    for (double r : {0.0, 1.0, 2.0}) {
      for (double gap : {0.5, 1.0, 2.5}) {
        const LocalizedBlock b = localized_block(H, f, r, r + gap);
        CHECK(gap * b.norm <= upper + 1e-9);
      }
    }
  }
}

TEST_CASE("atom gradients predict first-order change") {
  AlgebraElement f = AlgebraElement::delta({1}, 0.7);
  f.add({-2}, Complex(0.2, -0.3));
  f.add({3}, 0.4);
  const JdResult res = jd_exact(Z(), f, true);
  REQUIRE(res.argmax.has_value());
  const std::vector<Element> atoms{{1}, {-2}, {3}};
  const auto grads = jd_atom_gradients(Z(), res, atoms);
  REQUIRE(grads.size() == atoms.size());
  const double h = 1e-7;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    AlgebraElement g = f;
    g.add(atoms[i], h);
    const double predicted = res.value + h * res.argmax->hi * grads[i].real();
    // J_D is convex, so the linear prediction never exceeds the true value
    CHECK(jd_exact(Z(), g).value >= predicted - 1e-9);
  }
}

}  // TEST_SUITE
