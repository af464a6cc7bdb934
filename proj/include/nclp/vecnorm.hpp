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

#include <cstdint>
#include <span>
#include <vector>

#include "nclp/schatten.hpp"

namespace nclp {

/// y = sum_n coords[n] (x) e_n with k x k coordinates.
struct VecElem {
  int k = 0;
  std::vector<Mat> coords;

  VecElem() = default;
  VecElem(int k_, std::vector<Mat> coords_);
  static VecElem zeros(int k, int n);

  int n() const { return static_cast<int>(coords.size()); }
  double frobenius() const;
  bool is_zero() const { return frobenius() == 0.0; }

  VecElem& operator+=(const VecElem& other);
  VecElem& operator-=(const VecElem& other);
  VecElem& operator*=(Complex s);
};

VecElem operator+(VecElem a, const VecElem& b);
VecElem operator-(VecElem a, const VecElem& b);
VecElem operator*(Complex s, VecElem a);

/// ELL_ROW: the R_N-valued norm. R_COL: the C_N-valued norm.
enum class Side { kEllRow, kRCol };

const char* side_name(Side side);

/// A feasible factorization y_n = a z_n b with a = left^{1/2}, b = right^{1/2}.
/// For p >= 2 the left factor is a multiple of the identity. For R_COL the
/// factorization refers to the coordinatewise transpose of y.
struct FactorWitness {
  Mat left;
  Mat right;
};

struct NormOptions {
  int max_iters = 5000;
  /// Relative duality gap at which the barrier solver and certification stop.
  double gap_tol = 1e-11;
  double rank_tol = kDefaultRankTol;
  std::uint64_t seed = 0;
  /// Run the convex solver; when false only closed-form candidates are tried.
  bool use_solver = true;
  /// Extra factorizations evaluated as candidates (same side as the call).
  std::vector<FactorWitness> hints;
  /// Also try the sum of all hints (hints are expected in normalized form).
  bool combine_hints = false;
  /// At p = 2, use the two-sided parameterization (a general left factor)
  /// instead of the one-sided one. Ignored for p != 2.
  bool two_sided_at_2 = false;
};

struct UpperBound {
  double value = 0.0;
  /// Normalized: ||sum z z^*|| = 1 and the two factor norms are equal.
  FactorWitness witness;
  /// Dual directions recovered from the solver, already oriented for `side`.
  std::vector<VecElem> dual_candidates;
  /// Factorizations of the dual candidates for the conjugate exponent, read
  /// off the same solve; entry i belongs to dual_candidates[i].
  std::vector<FactorWitness> dual_factors;
  int iterations = 0;
  bool converged = true;
};

struct LowerBound {
  double value = 0.0;
  VecElem dual_witness;
};

struct NormCertificate {
  double upper = 0.0;
  double lower = 0.0;
  FactorWitness factor_witness;
  VecElem dual_witness;
  int iterations = 0;
  bool converged = true;
  /// beta only: the ELL part of the split; the R_COL part is y - split.
  VecElem split;
  FactorWitness col_witness;
};

/// ||sum z_n z_n^*||^{1/2}.
double min_tensor_row_norm(const VecElem& z);
/// ||sum z_n^* z_n||^{1/2}.
double min_tensor_col_norm(const VecElem& z);

/// sum_n tr(y_n y2_n).
Complex pairing(const VecElem& y, const VecElem& y2);

/// Coordinatewise transpose.
VecElem opposite_transform(const VecElem& y);

/// Objective value of an explicit factorization, padded by the projective
/// norm of whatever part of y it fails to reproduce.
double evaluate_witness(const VecElem& y, PExponent p, Side side, const FactorWitness& w,
                        double rank_tol = kDefaultRankTol);

UpperBound alpha_upper(const VecElem& y, PExponent p, Side side, const NormOptions& opts = {});

LowerBound alpha_lower(const VecElem& y, PExponent p, Side side, std::span<const VecElem> dual_pool,
                       const NormOptions& opts = {});

NormCertificate alpha_certify(const VecElem& y, PExponent p, Side side, const NormOptions& opts = {});

/// Lower bound for the p-sum of the ELL and R_COL norms from a pool of dual elements.
LowerBound beta_lower(const VecElem& y, PExponent p, std::span<const VecElem> dual_pool,
                      const NormOptions& opts = {});

NormCertificate beta_certify(const VecElem& y, PExponent p, const NormOptions& opts = {});

/// Keeps entry (i, i) of coordinate i; requires k = N.
VecElem project_diagonal(const VecElem& y);

/// Element with coordinate i equal to lambda_i E_ii.
VecElem diagonal_element(std::span<const Complex> lambda);

/// conj(lambda_i) |lambda_i|^{p-2}: the dual element attaining the l^p norm.
VecElem diagonal_dual_witness(std::span<const Complex> lambda, PExponent p);

double diagonal_closed_form(std::span<const Complex> lambda, PExponent p);

struct RowStack {
  Mat d;
  std::vector<Mat> w;
  /// ||d||_p.
  double d_norm = 0.0;
};

/// d = (sum_j d_j^* d_j)^{1/2} and w_j with w_j d = d_j, sum_j w_j^* w_j = supp(d).
RowStack row_stack_factorize(std::span<const Mat> d_list, PExponent p, double rtol = 1e-10);

}  // namespace nclp
