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
#include <string>
#include <vector>

#include "nclp/cpmaps.hpp"
#include "nclp/vecnorm.hpp"

namespace nclp {

/// Coordinate n is E_{n1}.
VecElem witness_w(int k);

struct ClosedFormImages {
  VecElem u1w;
  VecElem u2w;
  VecElem u3w;
  VecElem u4w;
};

/// (u_j (x) I) w written down directly, without applying any map.
ClosedFormImages closed_form_images(int k, PExponent p);

/// Diagonal coefficients of P (u (x) I) w: lambda_1 and the common value of lambda_i, i >= 2.
struct DiagonalCoefficients {
  double first = 0.0;
  double rest = 0.0;
};

DiagonalCoefficients counterexample_lambda(std::int64_t k, PExponent p);

/// (1/8)((2k^{-1/(2p)} + 1 + k^{-1/p})^p + (k-1)k^{-1/2})^{1/p}.
double lower_bound_formula(std::int64_t k, PExponent p);

/// ||lambda||_p / 2^{1/p'}: the p-sum lower bound from the diagonal dual witness.
double diagonal_witness_bound(std::int64_t k, PExponent p);

/// Smallest k with lower_bound_formula(k, p) > bound.
std::int64_t threshold_k(PExponent p, double bound);

struct PipelineOptions {
  NormOptions norm;
  int contraction_trials = 500;
  std::uint64_t seed = 0;
  double exact_tol = 1e-14;
  /// Largest k handled with matrices; sweeps switch to closed forms above it.
  int numeric_cap = 8;
};

struct CounterexampleReport {
  int k = 0;
  double p = 0.0;
  double upper_w = 0.0;
  double lower_w = 0.0;
  double formula_lb = 0.0;
  double numeric_lb = 0.0;
  double choi_min_eigenvalue = 0.0;
  double contraction_ratio = 0.0;
  double closed_form_error = 0.0;
  bool closed_form_match = false;
  bool upper_w_ok = false;
  bool dominance = false;
  bool completely_positive = false;
  bool contraction = false;
  /// numeric_lb or formula_lb exceeds 4.
  bool threshold_pass = false;
  /// numeric_lb > 4 upper_w: certified absence of a rigid factorisation.
  bool rigid_violation = false;
  std::vector<std::string> diagnostics;

  bool all_checks() const { return closed_form_match && upper_w_ok && dominance && completely_positive && contraction; }
};

CounterexampleReport verify_pipeline(int k, PExponent p, const PipelineOptions& opts = {});

/// The same chain with every quantity in closed form; valid for any k.
struct ScalarChain {
  std::int64_t k = 0;
  double p = 0.0;
  double upper_w = 1.0;
  double formula_lb = 0.0;
  double numeric_lb = 0.0;
  bool rigid_violation = false;
};

ScalarChain scalar_chain(std::int64_t k, PExponent p);

struct SweepRow {
  int k = 0;
  double p = 0.0;
  double formula_lb = 0.0;
  double numeric_lb = 0.0;
  double upper_w = 0.0;
  bool threshold_pass = false;
};

std::vector<SweepRow> sweep(PExponent p, int kmin, int kmax, const PipelineOptions& opts = {});

/// Header plus one line per row, fixed 17-digit scientific notation.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace nclp
