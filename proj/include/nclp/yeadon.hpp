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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nclp/cpmaps.hpp"
#include "nclp/schatten.hpp"
#include "nclp/vecnorm.hpp"

namespace nclp {

/// T(a) = W B J(a) with J(a) = blockdiag(a, ..., a^T, ...) and B the block
/// weights. The target has size n * (number of blocks).
struct YeadonSpec {
  int n = 0;
  std::vector<double> rep_weights;
  std::vector<double> antirep_weights;
  double p = 3.0;
  std::optional<Mat> w;

  int blocks() const { return static_cast<int>(rep_weights.size() + antirep_weights.size()); }
  int target_size() const { return n * blocks(); }
};

/// Throws InvalidSpec unless the weights satisfy sum s^p + sum t^p = 1 and W^*W = supp(B).
void validate(const YeadonSpec& spec, PExponent p);

/// A map of the form a -> W B J(a) e, where e masks a subset of blocks.
class YeadonMap {
 public:
  YeadonMap(int n, std::vector<double> weights, std::vector<bool> transpose, Mat w, std::vector<bool> active);

  int source_size() const { return n_; }
  int target_size() const { return n_ * static_cast<int>(weights_.size()); }

  Mat apply(const Mat& a) const;
  /// tr(T(a) c) = tr(a T^*(c)).
  Mat adjoint(const Mat& c) const;
  /// J(a) over every block, unweighted and unmasked.
  Mat jordan(const Mat& a) const;
  /// B = blockdiag(weights).
  Mat weight_matrix() const;
  /// e: projection onto the active blocks.
  Mat mask() const;
  const Mat& partial_isometry() const { return w_; }

 private:
  int n_;
  std::vector<double> weights_;
  std::vector<bool> transpose_;
  Mat w_;
  std::vector<bool> active_;
};

YeadonMap build_isometry(const YeadonSpec& spec, PExponent p);

struct JordanSplit {
  YeadonMap t1;  // representation blocks
  YeadonMap t2;  // anti-representation blocks
};

JordanSplit jordan_split(const YeadonSpec& spec, PExponent p);

enum class BlockKind { kRep, kAntirep };

struct ContractionSample {
  double input_upper = 0.0;
  double image_lower = 0.0;
  bool ok = true;
};

struct ContractionReport {
  std::string side;
  std::vector<ContractionSample> samples;
  int violations = 0;
  double max_excess = 0.0;
};

/// For each sample y (random, plus `extra`): certified lower bound of
/// (T (x) I) y, in the ELL norm for representation blocks and the R_COL norm
/// for anti-representation blocks, against the certified ELL upper bound of y.
ContractionReport tensor_contraction_report(const YeadonMap& t, BlockKind which, PExponent p, int n_coords,
                                            int samples, std::uint64_t seed, std::span<const VecElem> extra = {},
                                            const NormOptions& opts = {}, double tol = 1e-9);

/// u = S^* T with T built at p and S at p'.
KrausMap rigid_compose(const YeadonSpec& t_spec, const YeadonSpec& s_spec, PExponent p);

struct RigidSample {
  double input_upper = 0.0;
  double image_beta_lower = 0.0;
  bool ok = true;
};

struct RigidReport {
  std::vector<RigidSample> samples;
  int violations = 0;
  double max_ratio = 0.0;
};

/// Checks lower_beta((u (x) I) y) <= 4 upper_ell(y) + tol. A violation shows
/// u admits no rigid factorisation.
RigidReport rigid_bound_report(const KrausMap& u, PExponent p, int n_coords, int samples, std::uint64_t seed,
                               std::span<const VecElem> extra = {}, const NormOptions& opts = {},
                               double tol = 1e-9);

}  // namespace nclp
