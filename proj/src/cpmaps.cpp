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

#include "nclp/cpmaps.hpp"

#include <algorithm>
#include <cmath>

#include "nclp/errors.hpp"
#include "nclp/random.hpp"

namespace nclp {
namespace {

Mat unit(int k, int i, int j) {
  Mat e = Mat::Zero(k, k);
  e(i, j) = 1.0;
  return e;
}

void require_size(const KrausMap& m, const Mat& x) {
  if (x.rows() != m.k || x.cols() != m.k) throw InvalidInput("Kraus map applied to a matrix of the wrong size");
}

}  // namespace

KrausMap::KrausMap(int k_, std::vector<KrausTerm> terms_) : k(k_), terms(std::move(terms_)) {
  if (k < 1) throw InvalidInput("KrausMap: k must be positive");
  for (const auto& t : terms) {
    if (t.a.rows() != k || t.a.cols() != k || t.b.rows() != k || t.b.cols() != k) {
      throw InvalidInput("KrausMap: coefficients must be k x k");
    }
    require_finite(t.a, "KrausMap");
    require_finite(t.b, "KrausMap");
  }
}

Mat apply(const KrausMap& m, const Mat& x) {
  require_size(m, x);
  Mat out = Mat::Zero(m.k, m.k);
  for (const auto& t : m.terms) out += t.a.adjoint() * x * t.b;
  return out;
}

Mat choi(const KrausMap& m) {
  const int k = m.k;
  Mat c = Mat::Zero(k * k, k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) c.block(i * k, j * k, k, k) = nclp::apply(m, unit(k, i, j));
  }
  return c;
}

double choi_min_eigenvalue(const KrausMap& m) {
  const Mat c = choi(m);
  Eigen::SelfAdjointEigenSolver<Mat> es((c + c.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_completely_positive(const KrausMap& m, double tol) {
  const Mat c = choi(m);
  const Mat h = (c + c.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  const double top = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  if (tol < 0.0) tol = 1e-10 * top;
  if ((c - c.adjoint()).norm() > std::max(tol, 1e-12 * std::max(1.0, c.norm()))) return false;
  return ev.minCoeff() >= -tol;
}

KrausMap adjoint_map(const KrausMap& m) {
  KrausMap out;
  out.k = m.k;
  for (const auto& t : m.terms) out.terms.push_back({t.b.adjoint(), t.a.adjoint()});
  return out;
}

KrausMap identity_map(int k) { return KrausMap(k, {{Mat::Identity(k, k), Mat::Identity(k, k)}}); }

KrausMap transpose_map(int k) {
  std::vector<KrausTerm> terms;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) terms.push_back({unit(k, j, i), unit(k, i, j)});
  }
  return KrausMap(k, std::move(terms));
}

KrausMap scale_map(const KrausMap& m, Complex s) {
  KrausMap out = m;
  for (auto& t : out.terms) t.b *= s;
  return out;
}

Mat superoperator(const KrausMap& m) {
  const int k = m.k;
  Mat s(k * k, k * k);
  for (int c = 0; c < k; ++c) {
    for (int d = 0; d < k; ++d) {
      const Mat img = nclp::apply(m, unit(k, c, d));
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) s(a * k + b, c * k + d) = img(a, b);
      }
    }
  }
  return s;
}

KrausMap kraus_from_superoperator(const Mat& s, int k, double rel_tol) {
  if (k < 1 || s.rows() != k * k || s.cols() != k * k) {
    throw InvalidInput("kraus_from_superoperator: expected a k^2 x k^2 matrix");
  }
  // Realign S[(a,b),(c,d)] into Q[(a,c),(d,b)] = sum_t A_t(a,c) B_t(d,b).
  Mat q(k * k, k * k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int c = 0; c < k; ++c) {
        for (int d = 0; d < k; ++d) q(a * k + c, d * k + b) = s(a * k + b, c * k + d);
      }
    }
  }
  KrausMap out;
  out.k = k;
  Eigen::JacobiSVD<Mat> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return out;
  for (Eigen::Index t = 0; t < sv.size(); ++t) {
    if (sv[t] <= rel_tol * sv[0]) break;
    const double root = std::sqrt(sv[t]);
    Mat amat(k, k);
    Mat bmat(k, k);
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) {
        amat(x, y) = root * svd.matrixU()(x * k + y, t);
        bmat(x, y) = root * std::conj(svd.matrixV()(x * k + y, t));
      }
    }
    out.terms.push_back({amat.adjoint(), bmat});
  }
  return out;
}

CounterexampleMaps build_counterexample_maps(int k, PExponent p) {
  if (k < 1) throw InvalidInput("build_counterexample_maps: k must be positive");
  if (p.is_infinite()) throw InvalidInput("build_counterexample_maps: p must be finite");
  const double c = std::pow(static_cast<double>(k), -1.0 / (2.0 * p.value()));
  std::vector<Mat> a;
  std::vector<Mat> b;
  for (int i = 0; i < k; ++i) {
    a.push_back(unit(k, i, i));
    b.push_back(c * unit(k, 0, i));
  }
  CounterexampleMaps out;
  std::vector<KrausTerm> t1, t2, t3, t4, tu;
  for (int i = 0; i < k; ++i) {
    t1.push_back({a[i], b[i]});
    t2.push_back({b[i], a[i]});
    t3.push_back({a[i], a[i]});
    t4.push_back({b[i], b[i]});
    const Mat h = (a[i] + b[i]) * 0.5;
    tu.push_back({h, h});
  }
  out.u1 = KrausMap(k, std::move(t1));
  out.u2 = KrausMap(k, std::move(t2));
  out.u3 = KrausMap(k, std::move(t3));
  out.u4 = KrausMap(k, std::move(t4));
  out.u = KrausMap(k, std::move(tu));
  return out;
}

VecElem amplify_apply(const KrausMap& m, const VecElem& y) {
  if (y.k != m.k) throw InvalidInput("amplify_apply: size mismatch");
  VecElem out = y;
  for (Mat& c : out.coords) c = nclp::apply(m, c);
  return out;
}

double sampled_contraction_ratio(const KrausMap& m, PExponent p, int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("sampled_contraction_ratio: trials must be positive");
  const int k = m.k;
  double best = 0.0;
  auto probe = [&](const Mat& x) {
    const double nx = schatten_norm(x, p);
    if (nx > 0.0) best = std::max(best, schatten_norm(nclp::apply(m, x), p) / nx);
  };
  probe(Mat::Identity(k, k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) probe(unit(k, i, j));
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) probe(rng.gaussian(k, k));
  return best;
}

}  // namespace nclp
