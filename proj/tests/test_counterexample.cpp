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
#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "catch_amalgamated.hpp"
#include "nclp/counterexample.hpp"
#include "nclp/errors.hpp"
#include "test_support.hpp"

using namespace nclp;
using nclp::testing::max_diff;
using nclp::testing::unit;

namespace {

// Formula written out term by term, independent of the library.
double formula_oracle(double k, double p) {
  const double first = 2.0 * std::pow(k, -1.0 / (2.0 * p)) + 1.0 + std::pow(k, -1.0 / p);
  return std::pow(std::pow(first, p) + (k - 1.0) / std::sqrt(k), 1.0 / p) / 8.0;
}

VecElem tensor_basis(int k, const std::vector<std::tuple<int, int, int, double>>& terms) {
  VecElem y = VecElem::zeros(k, k);
  for (auto [i, j, n, c] : terms) y.coords[n](i, j) += c;
  return y;
}

}  // namespace

TEST_CASE("witness_w") {
  const VecElem w1 = witness_w(1);
  REQUIRE(w1.n() == 1);
  CHECK(w1.coords[0](0, 0) == Complex(1.0));
  const VecElem w3 = witness_w(3);
  REQUIRE(w3.n() == 3);
  for (int n = 0; n < 3; ++n) CHECK(max_diff(w3.coords[n], unit(3, n, 0)) == 0.0);
  CHECK_THROWS_AS(witness_w(0), InvalidInput);
}

TEST_CASE("witness norm certificate") {
  for (double pv : {1.5, 3.0, 4.0}) {
    const PExponent p(pv);
    const NormCertificate c = alpha_certify(witness_w(3), p, Side::kEllRow);
    const double expected = pv >= 2.0 ? 1.0 : std::pow(3.0, 1.0 / pv - 0.5);
    CHECK(std::abs(c.upper - expected) < 1e-6);
    CHECK(c.lower <= c.upper);
    CHECK(c.upper - c.lower < 1e-6);
  }
}

TEST_CASE("closed-form images") {
  for (int k = 1; k <= 5; ++k) {
    for (double pv : {1.5, 3.0, 4.0}) {
      const PExponent p(pv);
      const ClosedFormImages cf = closed_form_images(k, p);
      const double c = std::pow(k, -1.0 / (2.0 * pv));
      std::vector<std::tuple<int, int, int, double>> t1, t4;
      for (int i = 0; i < k; ++i) {
        t1.emplace_back(i, i, i, c);
        t4.emplace_back(i, i, 0, c * c);
      }
      CHECK(max_diff(cf.u1w, tensor_basis(k, t1)) < 1e-15);
      CHECK(max_diff(cf.u2w, tensor_basis(k, {{0, 0, 0, c}})) < 1e-15);
      CHECK(max_diff(cf.u3w, tensor_basis(k, {{0, 0, 0, 1.0}})) == 0.0);
      CHECK(max_diff(cf.u4w, tensor_basis(k, t4)) < 1e-15);

      const CounterexampleMaps maps = build_counterexample_maps(k, p);
      const VecElem w = witness_w(k);
      CHECK(max_diff(amplify_apply(maps.u1, w), cf.u1w) <= 1e-14);
      CHECK(max_diff(amplify_apply(maps.u2, w), cf.u2w) <= 1e-14);
      CHECK(max_diff(amplify_apply(maps.u3, w), cf.u3w) <= 1e-14);
      CHECK(max_diff(amplify_apply(maps.u4, w), cf.u4w) <= 1e-14);
      VecElem avg = VecElem::zeros(k, k);
      for (int n = 0; n < k; ++n) avg.coords[n] = (cf.u1w.coords[n] + cf.u2w.coords[n] + cf.u3w.coords[n] + cf.u4w.coords[n]) / 4.0;
      CHECK(max_diff(amplify_apply(maps.u, w), avg) <= 1e-14);
    }
  }
  const ClosedFormImages one = closed_form_images(1, PExponent(3.0));
  for (const VecElem* v : {&one.u1w, &one.u2w, &one.u3w, &one.u4w}) CHECK(v->coords[0](0, 0) == Complex(1.0));
}

TEST_CASE("diagonal coefficients and the lower-bound formula") {
  for (double pv : {1.5, 3.0, 4.0}) {
    const PExponent p(pv);
    CHECK(std::abs(lower_bound_formula(1, p) - 0.5) < 1e-15);
    for (std::int64_t k : {1, 2, 5, 17, 1000}) {
      const DiagonalCoefficients lam = counterexample_lambda(k, p);
      const double kd = static_cast<double>(k);
      const double c = std::pow(kd, -1.0 / (2.0 * pv));
      CHECK(std::abs(lam.first - (2.0 * c + 1.0 + c * c) / 4.0) < 1e-15);
      CHECK(std::abs(lam.rest - c / 4.0) < 1e-15);
      CHECK(nclp::testing::rel_diff(lower_bound_formula(k, p), formula_oracle(kd, pv)) < 1e-14);
      if (k <= 1000) {
        std::vector<Complex> v(static_cast<std::size_t>(k), Complex(lam.rest));
        v[0] = lam.first;
        CHECK(nclp::testing::rel_diff(lower_bound_formula(k, p), diagonal_closed_form(v, p) / 2.0) < 1e-14);
      }
      // Dual witness route: ||lambda||_p / 2^{1/p'} dominates the formula.
      const double dual = diagonal_witness_bound(k, p);
      CHECK(dual >= lower_bound_formula(k, p) - 1e-12);
      CHECK(nclp::testing::rel_diff(dual, 2.0 * lower_bound_formula(k, p) / std::pow(2.0, 1.0 - 1.0 / pv)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(lower_bound_formula(0, PExponent(3.0)), InvalidInput);
}

TEST_CASE("formula diverges") {
  for (double pv : {1.5, 3.0, 4.0}) {
    const PExponent p(pv);
    double prev = lower_bound_formula(4096, p);
    for (std::int64_t k = 8192; k <= (std::int64_t{1} << 40); k *= 2) {
      const double cur = lower_bound_formula(k, p);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK(prev > 4.0);
  }
}

TEST_CASE("threshold_k") {
  CHECK(threshold_k(PExponent(3.0), 0.4) == 1);
  for (auto [pv, expected] : {std::pair<double, std::int64_t>{3.0, 1073663003}, {4.0, 1099508945268}}) {
    const PExponent p(pv);
    const std::int64_t k = threshold_k(p, 4.0);
    CHECK(k == expected);
    CHECK(formula_oracle(static_cast<double>(k), pv) > 4.0);
    CHECK(formula_oracle(static_cast<double>(k - 1), pv) <= 4.0);
  }
  const std::int64_t k15 = threshold_k(PExponent(1.5), 4.0);
  CHECK(lower_bound_formula(k15, PExponent(1.5)) > 4.0);
  CHECK(lower_bound_formula(k15 - 1, PExponent(1.5)) <= 4.0);
  CHECK_THROWS_AS(threshold_k(PExponent(3.0), -1.0), InvalidInput);
}

TEST_CASE("verify_pipeline") {
  PipelineOptions opts;
  opts.contraction_trials = 100;
  for (auto [k, pv] : {std::pair<int, double>{2, 3.0}, {1, 3.0}, {1, 1.5}, {4, 4.0}, {3, 1.5}}) {
    const CounterexampleReport r = verify_pipeline(k, PExponent(pv), opts);
    INFO("k = " << k << ", p = " << pv);
    CHECK(r.all_checks());
    CHECK(r.closed_form_error <= 1e-14);
    CHECK(r.numeric_lb >= r.formula_lb - 1e-12);
    CHECK(r.choi_min_eigenvalue >= -1e-12);
    CHECK(r.contraction_ratio <= 1.0 + 1e-9);
    CHECK_FALSE(r.threshold_pass);
    CHECK_FALSE(r.rigid_violation);
    if (k == 1) {
      CHECK(std::abs(r.formula_lb - 0.5) < 1e-15);
      CHECK(std::abs(r.numeric_lb - std::pow(2.0, -(1.0 - 1.0 / pv))) < 1e-10);
    }
  }
  CHECK_THROWS_AS(verify_pipeline(0, PExponent(3.0)), InvalidInput);
}

TEST_CASE("scalar chain past the threshold") {
  const PExponent p(3.0);
  const std::int64_t k = threshold_k(p, 4.0);
  const ScalarChain below = scalar_chain(1000, p);
  CHECK_FALSE(below.rigid_violation);
  const ScalarChain past = scalar_chain(k, p);
  CHECK(past.formula_lb > 4.0);
  CHECK(past.upper_w == 1.0);
  CHECK(past.rigid_violation);
  const ScalarChain low_p = scalar_chain(threshold_k(PExponent(1.5), 4.0), PExponent(1.5));
  CHECK(low_p.upper_w > 1.0);
}

TEST_CASE("sweep and CSV") {
  PipelineOptions opts;
  opts.contraction_trials = 50;
  opts.numeric_cap = 3;
  const std::vector<SweepRow> rows = sweep(PExponent(3.0), 1, 5, opts);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].k == static_cast<int>(i) + 1);
    CHECK(nclp::testing::rel_diff(rows[i].formula_lb, formula_oracle(rows[i].k, 3.0)) < 1e-14);
    CHECK(rows[i].numeric_lb >= rows[i].formula_lb - 1e-12);
  }
  const std::string csv = sweep_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,p,formula_lb,numeric_lb,upper_w,threshold_pass");
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(count == 5);
  CHECK_THROWS_AS(sweep(PExponent(3.0), 3, 2), InvalidInput);
}
