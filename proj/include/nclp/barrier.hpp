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

#include <vector>

#include "nclp/schatten.hpp"

// A small dense log-barrier method for problems of the form
//
//   minimize   sum_j w_j * ||H_j||_{e_j}^{q_j}
//   subject to M_i(x) = C_i + sum_v x_v A_{i,v}  positive definite,
//
// where each H_j is a Hermitian block of the variable vector (or a scalar).
namespace nclp::barrier {

struct Entry {
  int row = 0;
  int col = 0;
  Complex coeff;
};

struct Lmi {
  Mat constant;
  /// terms[v] lists the nonzero entries of A_v; both triangles must be present.
  std::vector<std::vector<Entry>> terms;
};

/// weight * ||H||_exponent^power. A block of size n occupies n*n coordinates
/// starting at offset; size 0 denotes a single positive scalar.
struct PowerTerm {
  int offset = 0;
  int size = 0;
  double exponent = 1.0;
  double power = 1.0;
  double weight = 1.0;
};

struct Problem {
  int num_vars = 0;
  std::vector<Lmi> lmis;
  std::vector<PowerTerm> objective;
};

struct Options {
  /// Stop once the barrier parameter times the barrier degree drops below
  /// gap_tol times the objective.
  double gap_tol = 1e-11;
  int max_newton = 5000;
  int max_inner = 100;
  double mu_factor = 0.1;
  double centering_tol = 1e-10;
};

/// Constraint inverses after centering for one value of the barrier parameter.
struct PathPoint {
  /// Barrier degree times the parameter, relative to the objective.
  double relative_gap = 0.0;
  std::vector<Mat> lmi_inverses;
};

struct Result {
  RVec x;
  double objective = 0.0;
  int newton_steps = 0;
  bool converged = false;
  /// M_i(x)^{-1} at the returned point, one per constraint.
  std::vector<Mat> lmi_inverses;
  /// One entry per completed stage, in order of decreasing parameter.
  std::vector<PathPoint> path;
};

/// x0 must be strictly feasible.
Result minimize(const Problem& problem, const RVec& x0, const Options& options = {});

/// Coordinates of an n x n Hermitian matrix in the orthonormal basis
/// {E_ii} u {(E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2 : i < j}.
Mat herm_from_coords(const RVec& x, int offset, int n);
void herm_to_coords(const Mat& h, RVec& x, int offset);

/// Entries of basis element v of size n, shifted to (row0, col0).
std::vector<Entry> herm_basis_entries(int n, int v, int row0, int col0);

/// Value of the objective alone.
double objective_value(const Problem& problem, const RVec& x);

}  // namespace nclp::barrier
