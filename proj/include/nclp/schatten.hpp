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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace nclp {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kAsymmetryTol = 1e-8;

/// Exponent p in (1, inf].
class PExponent {
 public:
  explicit PExponent(double p);
  static PExponent infinity();

  double value() const { return p_; }
  bool is_infinite() const;

 private:
  double p_;
};

/// p/(p-1); rejects p = inf.
PExponent conjugate(PExponent p);

double schatten_norm(const Mat& a, PExponent p);

/// tr(a c) for a k x m and c m x k.
Complex trace_pairing(const Mat& a, const Mat& c);

struct PolarParts {
  Mat partial_isometry;
  Mat modulus;
};

PolarParts polar_decompose(const Mat& a, double rank_tol = kDefaultRankTol);

/// Projection onto eigenvectors of a PSD matrix with eigenvalue >= rank_tol * lambda_max.
Mat support_projection(const Mat& b, double rank_tol = kDefaultRankTol);

struct FactorThrough {
  Mat w;
  bool contractive = false;
  double residual = 0.0;
};

/// w = Q_a a^+ y b^+ Q_b, checked against a w b = y.
FactorThrough factor_through(const Mat& y, const Mat& a, const Mat& b, double rtol = 1e-8);

// Helpers shared by the other modules.

/// Verifies every entry is finite.
void require_finite(const Mat& a, const char* what);

/// (a + a^*)/2, after checking the asymmetry is below kAsymmetryTol (relative).
Mat hermitian_part(const Mat& a);

/// f applied to the eigenvalues of a Hermitian matrix.
Mat hermitian_function(const Mat& h, const std::function<double(double)>& f);

/// Largest eigenvalue of a Hermitian matrix (0 for empty).
double lambda_max(const Mat& h);

/// Principal square root of a PSD matrix; small negative eigenvalues are clipped.
Mat psd_sqrt(const Mat& h);

/// Pseudo-inverse by singular-value truncation at rank_tol * sigma_max.
Mat pseudo_inverse(const Mat& a, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the support of a PSD matrix.
Mat support_basis(const Mat& b, double rank_tol = kDefaultRankTol);

/// Singular values in descending order.
RVec singular_values(const Mat& a);

/// l^p norm of a nonnegative vector, p may be infinite.
double lp_norm(const RVec& v, double p);

}  // namespace nclp
