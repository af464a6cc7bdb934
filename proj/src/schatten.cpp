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

#include "nclp/schatten.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nclp/errors.hpp"

namespace nclp {

PExponent::PExponent(double p) : p_(p) {
  if (std::isnan(p) || !(p > 1.0)) {
    std::ostringstream msg;
    msg << "exponent must lie in (1, inf], got " << p;
    throw InvalidInput(msg.str());
  }
}

PExponent PExponent::infinity() { return PExponent(std::numeric_limits<double>::infinity()); }

bool PExponent::is_infinite() const { return std::isinf(p_); }

PExponent conjugate(PExponent p) {
  if (p.is_infinite()) throw InvalidInput("conjugate exponent of inf is 1, outside (1, inf]");
  return PExponent(p.value() / (p.value() - 1.0));
}

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

RVec singular_values(const Mat& a) {
  if (a.size() == 0) return RVec();
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues();
}

double lp_norm(const RVec& v, double p) {
  if (v.size() == 0) return 0.0;
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double schatten_norm(const Mat& a, PExponent p) {
  require_finite(a, "schatten_norm");
  return lp_norm(singular_values(a), p.value());
}

Complex trace_pairing(const Mat& a, const Mat& c) {
  if (a.rows() != c.cols() || a.cols() != c.rows()) {
    throw InvalidInput("trace_pairing: shapes do not compose to a square product");
  }
  // tr(ac) = sum_ij a_ij c_ji without forming the product.
  return (a.array() * c.transpose().array()).sum();
}

Mat hermitian_part(const Mat& a) {
  if (a.rows() != a.cols()) throw InvalidInput("expected a square matrix");
  require_finite(a, "hermitian_part");
  const double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() > kAsymmetryTol * scale) {
    throw InvalidInput("matrix is not Hermitian within tolerance");
  }
  return (a + a.adjoint()) * 0.5;
}

Mat hermitian_function(const Mat& h, const std::function<double(double)>& f) {
  if (h.size() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  RVec fv = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * fv.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double lambda_max(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Mat psd_sqrt(const Mat& h) {
  return hermitian_function(h, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

Mat pseudo_inverse(const Mat& a, double rank_tol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  const double cut = rank_tol * s[0];
  RVec inv = RVec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 0.0 && s[i] >= cut) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

Mat support_basis(const Mat& b, double rank_tol) {
  const Mat h = hermitian_part(b);
  if (h.size() == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double spread = std::max(std::abs(top), std::abs(ev.minCoeff()));
  if (ev.minCoeff() < -kDefaultRankTol * spread) {
    throw InvalidInput("support_projection: matrix is not positive semidefinite");
  }
  std::vector<Eigen::Index> keep;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev[i] > 0.0 && ev[i] >= rank_tol * top) keep.push_back(i);
    }
  }
  Mat basis(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(j) = es.eigenvectors().col(keep[j]);
  return basis;
}

Mat support_projection(const Mat& b, double rank_tol) {
  const Mat basis = support_basis(b, rank_tol);
  return basis * basis.adjoint();
}

PolarParts polar_decompose(const Mat& a, double rank_tol) {
  require_finite(a, "polar_decompose");
  PolarParts out;
  if (a.size() == 0) {
    out.partial_isometry = Mat::Zero(a.rows(), a.cols());
    out.modulus = Mat::Zero(a.cols(), a.cols());
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const Eigen::Index n = s.size();
  Eigen::Index r = 0;
  while (r < n && s[r] > 0.0 && s[r] >= rank_tol * s[0]) ++r;
  const Mat u = svd.matrixU().leftCols(r);
  const Mat v = svd.matrixV().leftCols(r);
  out.partial_isometry = u * v.adjoint();
  out.modulus = v * s.head(r).cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

FactorThrough factor_through(const Mat& y, const Mat& a, const Mat& b, double rtol) {
  const Mat ah = hermitian_part(a);
  const Mat bh = hermitian_part(b);
  if (y.rows() != ah.rows() || y.cols() != bh.rows()) {
    throw InvalidInput("factor_through: shapes of y, a, b do not match");
  }
  require_finite(y, "factor_through");
  const Mat qa = support_projection(ah);
  const Mat qb = support_projection(bh);
  FactorThrough out;
  out.w = qa * pseudo_inverse(ah) * y * pseudo_inverse(bh) * qb;
  out.residual = (ah * out.w * bh - y).norm();
  if (out.residual > rtol * y.norm()) {
    throw HypothesisViolated("factor_through: y does not factor as a w b");
  }
  out.contractive = schatten_norm(out.w, PExponent::infinity()) <= 1.0 + rtol;
  return out;
}

}  // namespace nclp
