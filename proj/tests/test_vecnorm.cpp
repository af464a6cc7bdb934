// Copyright 2026 The nclp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "nclp/errors.hpp"
#include "nclp/random.hpp"
#include "nclp/vecnorm.hpp"
#include "test_support.hpp"

using namespace nclp;
using nclp::testing::max_diff;
using nclp::testing::unit;

namespace {

// w_n = E_{n1}, n < k.
VecElem column_pattern(int k) {
  std::vector<Mat> c;
  for (int n = 0; n < k; ++n) c.push_back(unit(k, n, 0));
  return VecElem(k, c);
}

// y_n = E_{1n}, n < k.
VecElem row_pattern(int k) {
  std::vector<Mat> c;
  for (int n = 0; n < k; ++n) c.push_back(unit(k, 0, n));
  return VecElem(k, c);
}

double lp(const std::vector<Complex>& lam, double p) {
  double s = 0.0;
  for (const Complex& l : lam) s += std::pow(std::abs(l), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TEST_CASE("VecElem construction") {
  CHECK_THROWS_AS(VecElem(2, {Mat::Identity(2, 2), Mat::Identity(3, 3)}), InvalidInput);
  CHECK_THROWS_AS(VecElem(2, {Mat::Identity(2, 3)}), InvalidInput);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(VecElem(2, {bad}), InvalidInput);
  const VecElem z = VecElem::zeros(3, 4);
  CHECK(z.n() == 4);
  CHECK(z.is_zero());
}

TEST_CASE("min_tensor_row_norm") {
  CHECK(min_tensor_row_norm(VecElem(2, {unit(2, 0, 0)})) == Catch::Approx(1.0));
  for (int k = 1; k <= 5; ++k) {
    CHECK(std::abs(min_tensor_row_norm(row_pattern(k)) - std::sqrt(k)) < 1e-14);
    CHECK(std::abs(min_tensor_row_norm(column_pattern(k)) - 1.0) < 1e-14);
    CHECK(std::abs(min_tensor_col_norm(column_pattern(k)) - std::sqrt(k)) < 1e-14);
  }
}

TEST_CASE("pairing") {
  for (int k = 1; k <= 5; ++k) CHECK(pairing(column_pattern(k), row_pattern(k)) == Complex(k));
  Rng rng(21);
  const VecElem y = rng.vec_elem(3, 2);
  CHECK(pairing(y, VecElem::zeros(3, 2)) == Complex(0.0));
  const VecElem y2 = rng.vec_elem(3, 2);
  Complex oracle = 0.0;
  for (int n = 0; n < 2; ++n) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) oracle += y.coords[n](i, j) * y2.coords[n](j, i);
    }
  }
  CHECK(std::abs(pairing(y, y2) - oracle) < 1e-12);
  CHECK_THROWS_AS(pairing(y, rng.vec_elem(3, 3)), InvalidInput);
}

TEST_CASE("opposite_transform") {
  Rng rng(22);
  const Mat g = rng.gaussian(3, 3);
  const VecElem sym(3, {g + g.transpose()});
  CHECK(max_diff(opposite_transform(sym), sym) == 0.0);
  CHECK(max_diff(opposite_transform(column_pattern(4)), row_pattern(4)) == 0.0);
  const VecElem y = rng.vec_elem(3, 2);
  CHECK(max_diff(opposite_transform(opposite_transform(y)), y) == 0.0);
}

TEST_CASE("alpha_upper examples") {
  const std::vector<Complex> lam = {1.0, 0.5, 0.2, 0.1};
  const VecElem d = diagonal_element(lam);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (Side side : {Side::kEllRow, Side::kRCol}) {
      const UpperBound u = alpha_upper(d, PExponent(p), side);
      CHECK(std::abs(u.value - lp(lam, p)) <= 1e-3 * lp(lam, p));
      CHECK(u.value >= lp(lam, p) * (1.0 - 1e-12));

      // Equal to 1 for p >= 2 and to k^{1/p - 1/2} below.
      const double w_norm = p >= 2.0 ? 1.0 : std::pow(3.0, 1.0 / p - 0.5);
      const UpperBound uw = alpha_upper(column_pattern(3), PExponent(p), Side::kEllRow);
      CHECK(std::abs(uw.value - w_norm) < 1e-6);

      const UpperBound us = alpha_upper(VecElem(1, {Mat::Ones(1, 1), Mat::Ones(1, 1)}), PExponent(p), side);
      CHECK(std::abs(us.value - std::sqrt(2.0)) < 1e-6);
    }
  }
  // w_n = E_n1 E_11 with sum E_n1 E_1n = I, so s = E_11 attains 1 at p >= 2.
  const FactorWitness e11{Mat::Identity(3, 3), unit(3, 0, 0)};
  CHECK(std::abs(evaluate_witness(column_pattern(3), PExponent(3.0), Side::kEllRow, e11) - 1.0) < 1e-14);

  const UpperBound z = alpha_upper(VecElem::zeros(2, 3), PExponent(3.0), Side::kEllRow);
  CHECK(z.value == 0.0);
}

TEST_CASE("alpha_upper witness reproduces the value") {
  Rng rng(23);
  for (int t = 0; t < 6; ++t) {
    const VecElem y = rng.vec_elem(3, 2);
    for (double p : {1.5, 3.0}) {
      for (Side side : {Side::kEllRow, Side::kRCol}) {
        const UpperBound u = alpha_upper(y, PExponent(p), side);
        CHECK(std::abs(evaluate_witness(y, PExponent(p), side, u.witness) - u.value) <= 1e-9 * u.value);
      }
    }
  }
}

TEST_CASE("alpha_lower examples") {
  for (int k = 1; k <= 4; ++k) {
    for (double p : {1.5, 3.0}) {
      const VecElem w = column_pattern(k);
      const std::vector<VecElem> pool = {row_pattern(k)};
      const LowerBound lb = alpha_lower(w, PExponent(p), Side::kEllRow, pool);
      const double w_norm = p >= 2.0 ? 1.0 : std::pow(k, 1.0 / p - 0.5);
      CHECK(std::abs(lb.value - w_norm) < 1e-9);
    }
  }
  const std::vector<Complex> lam = {Complex(1.0, 0.5), -0.7, Complex(0.0, 0.3)};
  for (double p : {1.5, 2.0, 3.0}) {
    const std::vector<VecElem> pool = {diagonal_dual_witness(lam, PExponent(p))};
    for (Side side : {Side::kEllRow, Side::kRCol}) {
      const LowerBound lb = alpha_lower(diagonal_element(lam), PExponent(p), side, pool);
      CHECK(std::abs(lb.value - lp(lam, p)) < 1e-10 * lp(lam, p));
      CHECK(alpha_lower(VecElem::zeros(3, 3), PExponent(p), side, pool).value == 0.0);
      CHECK(alpha_lower(diagonal_element(lam), PExponent(p), side, {}).value == 0.0);
    }
  }
}

TEST_CASE("alpha_certify examples") {
  const std::vector<Complex> lam = {1.0, 1.0};
  const NormCertificate c = alpha_certify(diagonal_element(lam), PExponent(3.0), Side::kEllRow);
  CHECK(std::abs(c.upper - std::cbrt(2.0)) < 0.01 * std::cbrt(2.0));
  CHECK(std::abs(c.lower - std::cbrt(2.0)) < 0.01 * std::cbrt(2.0));
  CHECK(c.lower <= c.upper * (1.0 + 1e-9));

  const NormCertificate z = alpha_certify(VecElem::zeros(2, 2), PExponent(3.0), Side::kRCol);
  CHECK(z.upper == 0.0);
  CHECK(z.lower == 0.0);

  Rng rng(24);
  for (int t = 0; t < 5; ++t) {
    const VecElem y = rng.vec_elem(2, 2);
    for (double p : {1.5, 3.0}) {
      const NormCertificate cy = alpha_certify(y, PExponent(p), Side::kEllRow);
      CHECK(cy.lower <= cy.upper * (1.0 + 1e-9));
      INFO("p = " << p << " gap " << (cy.upper - cy.lower) / cy.upper);
      CHECK(cy.upper - cy.lower <= 1e-8 * cy.upper);
      // The denominator implied by the stored dual witness is at least the
      // certified lower bound of the dual norm.
      const double implied = std::abs(pairing(y, cy.dual_witness)) / cy.lower;
      const NormCertificate dual = alpha_certify(cy.dual_witness, conjugate(PExponent(p)), Side::kEllRow);
      CHECK(implied >= dual.lower * (1.0 - 1e-9));
      CHECK(implied <= dual.upper * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("beta_certify examples") {
  Rng rng(25);
  for (int t = 0; t < 4; ++t) {
    const VecElem y = rng.vec_elem(2, 3);
    for (double p : {1.5, 3.0}) {
      const NormCertificate b = beta_certify(y, PExponent(p));
      const double ul = alpha_upper(y, PExponent(p), Side::kEllRow).value;
      const double ur = alpha_upper(y, PExponent(p), Side::kRCol).value;
      CHECK(b.upper <= std::min(ul, ur) * (1.0 + 1e-12));
      CHECK(b.lower <= b.upper * (1.0 + 1e-9));
      CHECK(max_diff(b.split.coords[0] + (y - b.split).coords[0], y.coords[0]) < 1e-12);
    }
  }
  const std::vector<Complex> lam = {1.0, -0.5, Complex(0.0, 0.25)};
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double pp = conjugate(PExponent(p)).value();
    const NormCertificate b = beta_certify(diagonal_element(lam), PExponent(p));
    CHECK(b.lower >= 0.5 * lp(lam, p) * (1.0 - 1e-12));
    const std::vector<VecElem> pool = {diagonal_dual_witness(lam, PExponent(p))};
    const LowerBound lb = beta_lower(diagonal_element(lam), PExponent(p), pool);
    CHECK(std::abs(lb.value - lp(lam, p) / std::pow(2.0, 1.0 / pp)) < 1e-10);
  }
}

TEST_CASE("project_diagonal") {
  const std::vector<Complex> lam = {1.0, 2.0, 3.0};
  const VecElem d = diagonal_element(lam);
  CHECK(max_diff(project_diagonal(d), d) == 0.0);
  // Coordinate 2 equal to E_11 is off the diagonal.
  VecElem off = VecElem::zeros(3, 3);
  off.coords[1] = unit(3, 0, 0);
  CHECK(project_diagonal(off).is_zero());
  VecElem e111 = VecElem::zeros(3, 3);
  e111.coords[0] = unit(3, 0, 0);
  CHECK(max_diff(project_diagonal(column_pattern(3)), e111) == 0.0);
  Rng rng(26);
  const VecElem y = rng.vec_elem(3, 3);
  CHECK(max_diff(project_diagonal(project_diagonal(y)), project_diagonal(y)) == 0.0);
  CHECK_THROWS_AS(project_diagonal(rng.vec_elem(3, 2)), InvalidInput);
}

TEST_CASE("diagonal_closed_form") {
  CHECK(diagonal_closed_form(std::vector<Complex>{1.0, 0.0, 0.0}, PExponent(3.0)) == Catch::Approx(1.0));
  for (int k = 1; k <= 6; ++k) {
    const std::vector<Complex> ones(k, 1.0);
    CHECK(std::abs(diagonal_closed_form(ones, PExponent(2.5)) - std::pow(k, 1.0 / 2.5)) < 1e-14);
  }
  Rng rng(27);
  for (int t = 0; t < 10; ++t) {
    std::vector<Complex> lam;
    for (int i = 0; i < 4; ++i) lam.emplace_back(rng.normal(), rng.normal());
    CHECK(std::abs(diagonal_closed_form(lam, PExponent(1.7)) - lp(lam, 1.7)) < 1e-13);
  }
}

TEST_CASE("row_stack_factorize") {
  Rng rng(28);
  const Mat d1 = rng.gaussian(3, 3);
  const std::vector<Mat> single = {d1};
  const RowStack one = row_stack_factorize(single, PExponent(3.0));
  const PolarParts pp = polar_decompose(d1);
  CHECK(max_diff(one.d, pp.modulus) < 1e-10);
  CHECK(max_diff(one.w[0], pp.partial_isometry) < 1e-8);

  const std::vector<Complex> lam = {3.0, Complex(0.0, 4.0)};
  std::vector<Mat> line;
  for (const Complex& l : lam) line.push_back(l * unit(2, 0, 0));
  const RowStack ln = row_stack_factorize(line, PExponent(3.0));
  CHECK(max_diff(ln.d, 5.0 * unit(2, 0, 0)) < 1e-12);
  for (int j = 0; j < 2; ++j) CHECK(max_diff(ln.w[j], (lam[j] / 5.0) * unit(2, 0, 0)) < 1e-12);
  CHECK(std::abs(ln.d_norm - 5.0) < 1e-12);

  for (int t = 0; t < 10; ++t) {
    std::vector<Mat> ds;
    for (int j = 0; j < 3; ++j) ds.push_back(rng.gaussian(3, 3) * rng.psd_of_rank(3, rng.integer(1, 3)));
    const RowStack rs = row_stack_factorize(ds, PExponent(2.5));
    const Mat q = support_projection(rs.d);
    Mat sum = Mat::Zero(3, 3);
    for (int j = 0; j < 3; ++j) {
      CHECK((rs.w[j] * rs.d - ds[j]).norm() < 1e-10 * std::max(1.0, ds[j].norm()));
      CHECK((rs.w[j] * q - rs.w[j]).norm() < 1e-10);
      sum += rs.w[j].adjoint() * rs.w[j];
    }
    CHECK(max_diff(sum, q) < 1e-10);
  }
  CHECK_THROWS_AS(row_stack_factorize(std::vector<Mat>{Mat::Identity(2, 2), Mat::Identity(3, 3)}, PExponent(2.0)),
                  InvalidInput);
}
