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

#include "nclp/yeadon.hpp"

#include <cmath>

#include "nclp/errors.hpp"
#include "nclp/random.hpp"

namespace nclp {
namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kIsometryTol = 1e-10;

std::vector<double> all_weights(const YeadonSpec& spec) {
  std::vector<double> w = spec.rep_weights;
  w.insert(w.end(), spec.antirep_weights.begin(), spec.antirep_weights.end());
  return w;
}

std::vector<bool> transpose_flags(const YeadonSpec& spec) {
  std::vector<bool> t(spec.rep_weights.size(), false);
  t.insert(t.end(), spec.antirep_weights.size(), true);
  return t;
}

Mat block_weights(int n, const std::vector<double>& weights) {
  const int m = n * static_cast<int>(weights.size());
  Mat b = Mat::Zero(m, m);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    const int o = static_cast<int>(r) * n;
    b.block(o, o, n, n) = Mat::Identity(n, n) * weights[r];
  }
  return b;
}

Mat default_w(const YeadonSpec& spec) { return support_projection(block_weights(spec.n, all_weights(spec))); }

YeadonMap make_map(const YeadonSpec& spec, PExponent p, const std::vector<bool>& active) {
  validate(spec, p);
  return YeadonMap(spec.n, all_weights(spec), transpose_flags(spec), spec.w ? *spec.w : default_w(spec), active);
}

}  // namespace

void validate(const YeadonSpec& spec, PExponent p) {
  if (spec.n < 1) throw InvalidSpec("Yeadon spec: n must be positive");
  if (spec.blocks() == 0) throw InvalidSpec("Yeadon spec: at least one block is required");
  if (p.is_infinite()) throw InvalidSpec("Yeadon spec: p must be finite");
  if (p.value() == 2.0) throw InvalidSpec("Yeadon spec: p = 2 is excluded");
  double total = 0.0;
  for (double w : all_weights(spec)) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidSpec("Yeadon spec: weights must be finite and nonnegative");
    total += std::pow(w, p.value());
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw InvalidSpec("Yeadon spec: weights violate sum s^p + sum t^p = 1");
  }
  if (spec.w) {
    const int m = spec.target_size();
    const Mat& w = *spec.w;
    if (w.rows() != m || w.cols() != m) throw InvalidSpec("Yeadon spec: W must be m x m");
    if (!w.allFinite()) throw InvalidSpec("Yeadon spec: W has non-finite entries");
    const Mat supp = default_w(spec);
    if ((w.adjoint() * w - supp).norm() > kIsometryTol * std::max(1.0, supp.norm())) {
      throw InvalidSpec("Yeadon spec: W^*W differs from the support projection of B");
    }
  }
}

YeadonMap::YeadonMap(int n, std::vector<double> weights, std::vector<bool> transpose, Mat w,
                     std::vector<bool> active)
    : n_(n), weights_(std::move(weights)), transpose_(std::move(transpose)), w_(std::move(w)),
      active_(std::move(active)) {}

Mat YeadonMap::jordan(const Mat& a) const {
  if (a.rows() != n_ || a.cols() != n_) throw InvalidInput("Yeadon map applied to a matrix of the wrong size");
  const int m = target_size();
  Mat j = Mat::Zero(m, m);
  for (std::size_t r = 0; r < weights_.size(); ++r) {
    const int o = static_cast<int>(r) * n_;
    if (transpose_[r]) {
      j.block(o, o, n_, n_) = a.transpose();
    } else {
      j.block(o, o, n_, n_) = a;
    }
  }
  return j;
}

Mat YeadonMap::weight_matrix() const { return block_weights(n_, weights_); }

Mat YeadonMap::mask() const {
  const int m = target_size();
  Mat e = Mat::Zero(m, m);
  for (std::size_t r = 0; r < weights_.size(); ++r) {
    if (!active_[r]) continue;
    const int o = static_cast<int>(r) * n_;
    e.block(o, o, n_, n_) = Mat::Identity(n_, n_);
  }
  return e;
}

Mat YeadonMap::apply(const Mat& a) const {
  if (a.rows() != n_ || a.cols() != n_) throw InvalidInput("Yeadon map applied to a matrix of the wrong size");
  const int m = target_size();
  Mat inner = Mat::Zero(m, m);
  for (std::size_t r = 0; r < weights_.size(); ++r) {
    if (!active_[r]) continue;
    const int o = static_cast<int>(r) * n_;
    inner.block(o, o, n_, n_) = weights_[r] * (transpose_[r] ? Mat(a.transpose()) : a);
  }
  return w_ * inner;
}

Mat YeadonMap::adjoint(const Mat& c) const {
  const int m = target_size();
  if (c.rows() != m || c.cols() != m) throw InvalidInput("Yeadon adjoint applied to a matrix of the wrong size");
  const Mat x = c * w_;
  Mat out = Mat::Zero(n_, n_);
  for (std::size_t r = 0; r < weights_.size(); ++r) {
    if (!active_[r]) continue;
    const int o = static_cast<int>(r) * n_;
    const Mat blk = weights_[r] * x.block(o, o, n_, n_);
    out += transpose_[r] ? Mat(blk.transpose()) : blk;
  }
  return out;
}

YeadonMap build_isometry(const YeadonSpec& spec, PExponent p) {
  return make_map(spec, p, std::vector<bool>(static_cast<std::size_t>(spec.blocks()), true));
}

JordanSplit jordan_split(const YeadonSpec& spec, PExponent p) {
  std::vector<bool> rep(spec.rep_weights.size(), true);
  rep.insert(rep.end(), spec.antirep_weights.size(), false);
  std::vector<bool> anti(rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i) anti[i] = !rep[i];
  return JordanSplit{make_map(spec, p, rep), make_map(spec, p, anti)};
}

ContractionReport tensor_contraction_report(const YeadonMap& t, BlockKind which, PExponent p, int n_coords,
                                            int samples, std::uint64_t seed, std::span<const VecElem> extra,
                                            const NormOptions& opts, double tol) {
  ContractionReport rep;
  const Side image_side = which == BlockKind::kRep ? Side::kEllRow : Side::kRCol;
  rep.side = side_name(image_side);
  std::vector<VecElem> inputs(extra.begin(), extra.end());
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) inputs.push_back(rng.vec_elem(t.source_size(), n_coords));
  for (const VecElem& y : inputs) {
    ContractionSample cs;
    cs.input_upper = alpha_upper(y, p, Side::kEllRow, opts).value;
    VecElem image = VecElem::zeros(t.target_size(), y.n());
    for (int n = 0; n < y.n(); ++n) image.coords[n] = t.apply(y.coords[n]);
    cs.image_lower = alpha_certify(image, p, image_side, opts).lower;
    const double excess = cs.image_lower - cs.input_upper;
    cs.ok = excess <= tol * std::max(1.0, cs.input_upper);
    if (!cs.ok) ++rep.violations;
    rep.max_excess = std::max(rep.max_excess, excess);
    rep.samples.push_back(cs);
  }
  return rep;
}

KrausMap rigid_compose(const YeadonSpec& t_spec, const YeadonSpec& s_spec, PExponent p) {
  if (t_spec.n != s_spec.n) throw InvalidInput("rigid_compose: source sizes differ");
  if (t_spec.target_size() != s_spec.target_size()) throw InvalidInput("rigid_compose: target sizes differ");
  const YeadonMap t = build_isometry(t_spec, p);
  const YeadonMap s = build_isometry(s_spec, conjugate(p));
  const int n = t_spec.n;
  Mat sup(n * n, n * n);
  for (int c = 0; c < n; ++c) {
    for (int d = 0; d < n; ++d) {
      Mat e = Mat::Zero(n, n);
      e(c, d) = 1.0;
      const Mat img = s.adjoint(t.apply(e));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) sup(a * n + b, c * n + d) = img(a, b);
      }
    }
  }
  return kraus_from_superoperator(sup, n);
}

RigidReport rigid_bound_report(const KrausMap& u, PExponent p, int n_coords, int samples, std::uint64_t seed,
                               std::span<const VecElem> extra, const NormOptions& opts, double tol) {
  RigidReport rep;
  std::vector<VecElem> inputs(extra.begin(), extra.end());
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) inputs.push_back(rng.vec_elem(u.k, n_coords));
  for (const VecElem& y : inputs) {
    RigidSample rs;
    rs.input_upper = alpha_upper(y, p, Side::kEllRow, opts).value;
    rs.image_beta_lower = beta_certify(amplify_apply(u, y), p, opts).lower;
    rs.ok = rs.image_beta_lower <= 4.0 * rs.input_upper + tol * std::max(1.0, rs.input_upper);
    if (!rs.ok) ++rep.violations;
    if (rs.input_upper > 0.0) rep.max_ratio = std::max(rep.max_ratio, rs.image_beta_lower / rs.input_upper);
    rep.samples.push_back(rs);
  }
  return rep;
}

}  // namespace nclp
