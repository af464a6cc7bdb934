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
#include "nclp/yeadon.hpp"
#include "test_support.hpp"

using namespace nclp;
using nclp::testing::max_diff;

namespace {

// Positive weights with sum w^p = 1 over both lists.
YeadonSpec random_spec(Rng& rng, int n, int reps, int antireps, double p) {
  YeadonSpec spec;
  spec.n = n;
  spec.p = p;
  std::vector<double> raw;
  double total = 0.0;
  for (int i = 0; i < reps + antireps; ++i) {
    raw.push_back(rng.uniform(0.2, 1.0));
    total += std::pow(raw.back(), p);
  }
  for (int i = 0; i < reps + antireps; ++i) {
    const double w = raw[i] / std::pow(total, 1.0 / p);
    (i < reps ? spec.rep_weights : spec.antirep_weights).push_back(w);
  }
  return spec;
}

YeadonSpec simple_spec(int n, std::vector<double> reps, std::vector<double> antireps, double p) {
  YeadonSpec spec;
  spec.n = n;
  spec.rep_weights = std::move(reps);
  spec.antirep_weights = std::move(antireps);
  spec.p = p;
  return spec;
}

}  // namespace

TEST_CASE("build_isometry on single blocks") {
  const PExponent p(3.0);
  Rng rng(41);
  const YeadonMap id = build_isometry(simple_spec(3, {1.0}, {}, 3.0), p);
  const YeadonMap tr = build_isometry(simple_spec(3, {}, {1.0}, 3.0), p);
  for (int t = 0; t < 10; ++t) {
    const Mat a = rng.gaussian(3, 3);
    CHECK(max_diff(id.apply(a), a) == 0.0);
    CHECK(max_diff(tr.apply(a), a.transpose()) == 0.0);
    CHECK(std::abs(schatten_norm(tr.apply(a), p) - schatten_norm(a, p)) < 1e-12 * schatten_norm(a, p));
  }
}

TEST_CASE("build_isometry preserves the p-norm") {
  Rng rng(42);
  const std::vector<std::pair<int, int>> shapes = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (double pv : {1.5, 3.0, 4.0}) {
    const PExponent p(pv);
    for (auto [r, a] : shapes) {
      const YeadonSpec spec = random_spec(rng, 3, r, a, pv);
      const YeadonMap t = build_isometry(spec, p);
      CHECK(t.target_size() == 3 * (r + a));
      for (int s = 0; s < 100; ++s) {
        const Mat x = rng.gaussian(3, 3);
        const double nx = schatten_norm(x, p);
        CHECK(std::abs(schatten_norm(t.apply(x), p) - nx) <= 1e-10 * nx);
      }
    }
  }
}

TEST_CASE("mixed spec matches the block formula") {
  const double pv = 3.0;
  const double s = std::pow(0.3, 1.0 / pv);
  const double tt = std::pow(0.7, 1.0 / pv);
  const YeadonMap t = build_isometry(simple_spec(2, {s}, {tt}, pv), PExponent(pv));
  Rng rng(43);
  const Mat a = rng.gaussian(2, 2);
  Mat expected = Mat::Zero(4, 4);
  expected.block(0, 0, 2, 2) = s * a;
  expected.block(2, 2, 2, 2) = tt * a.transpose();
  CHECK(max_diff(t.apply(a), expected) < 1e-15);
}

TEST_CASE("spec validation") {
  const PExponent p(3.0);
  CHECK_THROWS_AS(build_isometry(simple_spec(2, {0.5}, {0.5}, 3.0), p), InvalidSpec);
  CHECK_THROWS_AS(build_isometry(simple_spec(2, {1.0}, {}, 2.0), PExponent(2.0)), InvalidSpec);
  CHECK_THROWS_AS(build_isometry(simple_spec(0, {1.0}, {}, 3.0), p), InvalidSpec);
  CHECK_THROWS_AS(build_isometry(simple_spec(2, {}, {}, 3.0), p), InvalidSpec);
  CHECK_THROWS_AS(build_isometry(simple_spec(2, {-1.0}, {}, 3.0), p), InvalidSpec);
  CHECK_THROWS_AS(build_isometry(simple_spec(2, {1.0 + 1e-9}, {}, 3.0), p), InvalidSpec);
  CHECK_NOTHROW(build_isometry(simple_spec(2, {1.0 + 1e-14}, {}, 3.0), p));

  // A zero block leaves part of the target outside the range.
  const YeadonMap partial = build_isometry(simple_spec(2, {1.0, 0.0}, {}, 3.0), p);
  Rng rng(44);
  const Mat a = rng.gaussian(2, 2);
  CHECK(std::abs(schatten_norm(partial.apply(a), p) - schatten_norm(a, p)) < 1e-12 * schatten_norm(a, p));

  YeadonSpec bad_w = simple_spec(2, {1.0}, {}, 3.0);
  bad_w.w = 2.0 * Mat::Identity(2, 2);
  CHECK_THROWS_AS(validate(bad_w, p), InvalidSpec);
  bad_w.w = Mat::Identity(3, 3);
  CHECK_THROWS_AS(validate(bad_w, p), InvalidSpec);
}

TEST_CASE("custom partial isometry") {
  Rng rng(45);
  const double pv = 1.5;
  YeadonSpec spec = random_spec(rng, 2, 1, 1, pv);
  const Mat u = rng.unitary(4);
  spec.w = u;
  const YeadonMap t = build_isometry(spec, PExponent(pv));
  for (int s = 0; s < 20; ++s) {
    const Mat a = rng.gaussian(2, 2);
    const double na = schatten_norm(a, PExponent(pv));
    CHECK(std::abs(schatten_norm(t.apply(a), PExponent(pv)) - na) <= 1e-10 * na);
    CHECK(max_diff(t.apply(a), u * t.weight_matrix() * t.jordan(a)) < 1e-12 * na);
  }
}

TEST_CASE("Jordan split and structural identities") {
  Rng rng(46);
  for (double pv : {1.5, 3.0}) {
    const PExponent p(pv);
    const YeadonSpec spec = random_spec(rng, 3, 2, 1, pv);
    const YeadonMap t = build_isometry(spec, p);
    const JordanSplit split = jordan_split(spec, p);
    const Mat b = t.weight_matrix();
    Mat bp = b;
    for (int i = 0; i < b.rows(); ++i) bp(i, i) = std::pow(b(i, i).real(), pv);
    for (int s = 0; s < 20; ++s) {
      const Mat a = rng.gaussian(3, 3);
      CHECK(max_diff(split.t1.apply(a) + split.t2.apply(a), t.apply(a)) == 0.0);
      const double na = schatten_norm(a, p);
      CHECK(schatten_norm(split.t1.apply(a), p) <= (1.0 + 1e-9) * na);
      CHECK(schatten_norm(split.t2.apply(a), p) <= (1.0 + 1e-9) * na);
      const Mat j = t.jordan(a);
      CHECK(max_diff(b * j, j * b) < 1e-12 * std::max(1.0, j.cwiseAbs().maxCoeff()));
      CHECK(std::abs(a.trace() - (bp * j).trace()) < 1e-10 * std::max(1.0, std::abs(a.trace())));
    }
    CHECK(max_diff(split.t1.mask() + split.t2.mask(), Mat::Identity(9, 9)) == 0.0);
  }

  const JordanSplit rep_only = jordan_split(simple_spec(2, {1.0}, {}, 3.0), PExponent(3.0));
  const JordanSplit anti_only = jordan_split(simple_spec(2, {}, {1.0}, 3.0), PExponent(3.0));
  const Mat a = rng.gaussian(2, 2);
  CHECK(rep_only.t2.apply(a).norm() == 0.0);
  CHECK(anti_only.t1.apply(a).norm() == 0.0);
}

TEST_CASE("adjoint identity") {
  Rng rng(47);
  YeadonSpec spec = random_spec(rng, 3, 1, 2, 3.0);
  spec.w = rng.unitary(9);
  const YeadonMap t = build_isometry(spec, PExponent(3.0));
  const JordanSplit split = jordan_split(spec, PExponent(3.0));
  for (int s = 0; s < 20; ++s) {
    const Mat a = rng.gaussian(3, 3);
    const Mat c = rng.gaussian(9, 9);
    for (const YeadonMap* m : {&t, &split.t1, &split.t2}) {
      const Complex lhs = (m->apply(a) * c).trace();
      const Complex rhs = (a * m->adjoint(c)).trace();
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)) * 10.0);
    }
  }
}

TEST_CASE("rigid_compose") {
  Rng rng(48);
  const double pv = 3.0;
  const PExponent p(pv);
  const PExponent q = conjugate(p);
  const Mat x = rng.gaussian(3, 3);

  const KrausMap id = rigid_compose(simple_spec(3, {1.0}, {}, pv), simple_spec(3, {1.0}, {}, q.value()), p);
  CHECK(max_diff(nclp::apply(id, x), x) < 1e-12);
  const KrausMap tt = rigid_compose(simple_spec(3, {}, {1.0}, pv), simple_spec(3, {}, {1.0}, q.value()), p);
  CHECK(max_diff(nclp::apply(tt, x), x) < 1e-12);

  const double s = std::pow(0.4, 1.0 / pv);
  const double t = std::pow(0.6, 1.0 / pv);
  const double s2 = std::pow(0.25, 1.0 / q.value());
  const double t2 = std::pow(0.75, 1.0 / q.value());
  const KrausMap mixed = rigid_compose(simple_spec(3, {s}, {t}, pv), simple_spec(3, {s2}, {t2}, q.value()), p);
  CHECK(max_diff(nclp::apply(mixed, x), (s * s2 + t * t2) * x) < 1e-12);

  CHECK_THROWS_AS(rigid_compose(simple_spec(3, {1.0}, {}, pv), simple_spec(2, {1.0}, {}, q.value()), p),
                  InvalidInput);
  CHECK_THROWS_AS(rigid_compose(simple_spec(3, {1.0}, {}, pv), simple_spec(3, {s2}, {t2}, q.value()), p),
                  InvalidInput);
}

TEST_CASE("tensor contraction reports") {
  const double pv = 3.0;
  const PExponent p(pv);
  Rng rng(49);
  const YeadonSpec spec = random_spec(rng, 2, 1, 1, pv);
  const JordanSplit split = jordan_split(spec, p);
  std::vector<Mat> wc;
  for (int n = 0; n < 2; ++n) wc.push_back(nclp::testing::unit(2, n, 0));
  const std::vector<VecElem> extra = {VecElem(2, wc)};

  const ContractionReport r1 = tensor_contraction_report(split.t1, BlockKind::kRep, p, 3, 3, 7, extra);
  CHECK(r1.samples.size() == 4);
  CHECK(r1.violations == 0);
  CHECK(r1.side == side_name(Side::kEllRow));
  const ContractionReport r2 = tensor_contraction_report(split.t2, BlockKind::kAntirep, p, 3, 3, 7, extra);
  CHECK(r2.violations == 0);
  CHECK(r2.side == side_name(Side::kRCol));

  // Identity: the image bounds reproduce the input norm.
  const YeadonMap id = build_isometry(simple_spec(2, {1.0}, {}, pv), p);
  const ContractionReport ri = tensor_contraction_report(id, BlockKind::kRep, p, 3, 3, 8);
  CHECK(ri.violations == 0);
  for (const ContractionSample& s : ri.samples) CHECK(nclp::testing::rel_diff(s.image_lower, s.input_upper) < 1e-6);

  // The zero map passes trivially.
  const YeadonMap zero(2, {1.0}, {false}, Mat::Identity(2, 2), {false});
  const ContractionReport rz = tensor_contraction_report(zero, BlockKind::kRep, p, 3, 2, 9);
  CHECK(rz.violations == 0);
  for (const ContractionSample& s : rz.samples) CHECK(s.image_lower == 0.0);
}

TEST_CASE("rigid bound reports") {
  const double pv = 3.0;
  const PExponent p(pv);
  const PExponent q = conjugate(p);
  Rng rng(50);
  const YeadonSpec t = random_spec(rng, 2, 1, 1, pv);
  const YeadonSpec s = random_spec(rng, 2, 1, 1, q.value());
  const RigidReport r = rigid_bound_report(rigid_compose(t, s, p), p, 3, 4, 11);
  CHECK(r.samples.size() == 4);
  CHECK(r.violations == 0);
  CHECK(r.max_ratio <= 4.0);
  const RigidReport ri = rigid_bound_report(identity_map(2), p, 3, 4, 12);
  CHECK(ri.violations == 0);
  CHECK(ri.max_ratio <= 1.0 + 1e-9);
}
