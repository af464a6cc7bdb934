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
#include <vector>

#include "nclp/schatten.hpp"
#include "nclp/vecnorm.hpp"

namespace nclp {

struct KrausTerm {
  Mat a;
  Mat b;
};

/// x -> sum_i a_i^* x b_i on k x k matrices.
struct KrausMap {
  int k = 0;
  std::vector<KrausTerm> terms;

  KrausMap() = default;
  KrausMap(int k_, std::vector<KrausTerm> terms_);
};

Mat apply(const KrausMap& m, const Mat& x);

/// sum_ij E_ij (x) u(E_ij).
Mat choi(const KrausMap& m);
double choi_min_eigenvalue(const KrausMap& m);
/// Negative tol selects the default 1e-10 * lambda_max(|C|).
bool is_completely_positive(const KrausMap& m, double tol = -1.0);

/// Adjoint under (x, y) -> tr(x y).
KrausMap adjoint_map(const KrausMap& m);

KrausMap identity_map(int k);
KrausMap transpose_map(int k);
KrausMap scale_map(const KrausMap& m, Complex s);

/// Matrix of the map on row-major vectorizations.
Mat superoperator(const KrausMap& m);
/// Kraus form of any linear map given by its superoperator, with the
/// fewest terms (operator Schmidt decomposition).
KrausMap kraus_from_superoperator(const Mat& s, int k, double rel_tol = 1e-14);

struct CounterexampleMaps {
  KrausMap u1;
  KrausMap u2;
  KrausMap u3;
  KrausMap u4;
  KrausMap u;
};

/// a_i = E_ii, b_i = k^{-1/(2p)} E_1i; u1..u4 pair them as (a,b), (b,a),
/// (a,a), (b,b) and u uses ((a_i + b_i)/2, (a_i + b_i)/2).
CounterexampleMaps build_counterexample_maps(int k, PExponent p);

VecElem amplify_apply(const KrausMap& m, const VecElem& y);

/// max ||m(x)||_p / ||x||_p over matrix units, the identity and `trials`
/// random matrices.
double sampled_contraction_ratio(const KrausMap& m, PExponent p, int trials, std::uint64_t seed);

}  // namespace nclp
