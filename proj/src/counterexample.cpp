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

#include "nclp/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nclp/errors.hpp"

namespace nclp {
namespace {

double max_abs_diff(const VecElem& a, const VecElem& b) {
  double m = 0.0;
  for (int n = 0; n < a.n(); ++n) m = std::max(m, (a.coords[n] - b.coords[n]).cwiseAbs().maxCoeff());
  return m;
}

void require_k(std::int64_t k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

VecElem witness_w(int k) {
  require_k(k);
  VecElem w = VecElem::zeros(k, k);
  for (int n = 0; n < k; ++n) w.coords[n](n, 0) = 1.0;
  return w;
}

ClosedFormImages closed_form_images(int k, PExponent p) {
  require_k(k);
  const double c = std::pow(static_cast<double>(k), -1.0 / (2.0 * p.value()));
  const double c2 = std::pow(static_cast<double>(k), -1.0 / p.value());
  ClosedFormImages out{VecElem::zeros(k, k), VecElem::zeros(k, k), VecElem::zeros(k, k), VecElem::zeros(k, k)};
  for (int i = 0; i < k; ++i) out.u1w.coords[i](i, i) = c;
  out.u2w.coords[0](0, 0) = c;
  out.u3w.coords[0](0, 0) = 1.0;
  out.u4w.coords[0] = Mat::Identity(k, k) * c2;
  return out;
}

DiagonalCoefficients counterexample_lambda(std::int64_t k, PExponent p) {
  require_k(k);
  const double kd = static_cast<double>(k);
  const double c = std::pow(kd, -1.0 / (2.0 * p.value()));
  const double c2 = std::pow(kd, -1.0 / p.value());
  return {0.25 * (2.0 * c + 1.0 + c2), 0.25 * c};
}

double lower_bound_formula(std::int64_t k, PExponent p) {
  require_k(k);
  const double pv = p.value();
  const double kd = static_cast<double>(k);
  const double first = 2.0 * std::pow(kd, -1.0 / (2.0 * pv)) + 1.0 + std::pow(kd, -1.0 / pv);
  const double tail = (kd - 1.0) / std::sqrt(kd);
  return std::pow(std::pow(first, pv) + tail, 1.0 / pv) / 8.0;
}

double diagonal_witness_bound(std::int64_t k, PExponent p) {
  const DiagonalCoefficients lam = counterexample_lambda(k, p);
  const double pv = p.value();
  const double sum = std::pow(lam.first, pv) + static_cast<double>(k - 1) * std::pow(lam.rest, pv);
  return std::pow(sum, 1.0 / pv) / std::pow(2.0, 1.0 / conjugate(p).value());
}

std::int64_t threshold_k(PExponent p, double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidInput("threshold_k: bound must be positive and finite");
  if (p.is_infinite()) throw InvalidInput("threshold_k: p must be finite");
  auto f = [&](std::int64_t k) { return lower_bound_formula(k, p); };
  if (f(1) > bound) return 1;
  // The formula is not monotone for very small k; scan that range directly.
  constexpr std::int64_t kScan = 4096;
  for (std::int64_t k = 2; k <= kScan; ++k) {
    if (f(k) > bound) return k;
  }
  std::int64_t lo = kScan;
  std::int64_t hi = 2 * kScan;
  while (f(hi) <= bound) {
    if (hi > (std::numeric_limits<std::int64_t>::max() >> 2)) {
      throw NumericalDegeneracy("threshold_k: bound not reached below 2^61");
    }
    lo = hi;
    hi *= 2;
  }
  // Confirm growth on the bracket before bisecting.
  constexpr int kGrid = 64;
  double prev = f(lo);
  for (int g = 1; g <= kGrid; ++g) {
    const double t = static_cast<double>(g) / kGrid;
    const auto k = static_cast<std::int64_t>(std::llround(std::exp(std::log(double(lo)) * (1 - t) + std::log(double(hi)) * t)));
    const double cur = f(std::clamp(k, lo, hi));
    if (cur < prev) throw NumericalDegeneracy("threshold_k: formula is not monotone on the search bracket");
    prev = cur;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (f(mid) > bound) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

CounterexampleReport verify_pipeline(int k, PExponent p, const PipelineOptions& opts) {
  require_k(k);
  if (k > opts.numeric_cap) throw InvalidInput("verify_pipeline: k exceeds the numeric cap");
  CounterexampleReport rep;
  rep.k = k;
  rep.p = p.value();
  const CounterexampleMaps maps = build_counterexample_maps(k, p);
  const VecElem w = witness_w(k);
  const ClosedFormImages cf = closed_form_images(k, p);

  double err = 0.0;
  err = std::max(err, max_abs_diff(amplify_apply(maps.u1, w), cf.u1w));
  err = std::max(err, max_abs_diff(amplify_apply(maps.u2, w), cf.u2w));
  err = std::max(err, max_abs_diff(amplify_apply(maps.u3, w), cf.u3w));
  err = std::max(err, max_abs_diff(amplify_apply(maps.u4, w), cf.u4w));
  const VecElem image = amplify_apply(maps.u, w);
  const VecElem quarter = Complex(0.25) * (cf.u1w + cf.u2w + cf.u3w + cf.u4w);
  err = std::max(err, max_abs_diff(image, quarter));
  rep.closed_form_error = err;
  rep.closed_form_match = err <= opts.exact_tol;
  if (!rep.closed_form_match) rep.diagnostics.push_back("amplified images differ from the closed forms");

  const NormCertificate cw = alpha_certify(w, p, Side::kEllRow, opts.norm);
  rep.upper_w = cw.upper;
  rep.lower_w = cw.lower;
  const double expected_w = p.value() >= 2.0 ? 1.0 : std::pow(double(k), 1.0 / p.value() - 0.5);
  rep.upper_w_ok = std::abs(cw.upper - expected_w) <= 1e-9 * expected_w && cw.upper - cw.lower <= 1e-9 * cw.upper;
  if (!rep.upper_w_ok) rep.diagnostics.push_back("certificate of w is not tight at its closed form");

  const VecElem diag = project_diagonal(image);
  std::vector<Complex> lam(k);
  for (int i = 0; i < k; ++i) lam[i] = diag.coords[i](i, i);
  const VecElem mu = diagonal_dual_witness(lam, p);
  // The dual denominators of a diagonal element are exact closed-form candidates.
  NormOptions closed = opts.norm;
  closed.use_solver = false;
  rep.numeric_lb = beta_lower(image, p, std::span<const VecElem>(&mu, 1), closed).value;
  rep.formula_lb = lower_bound_formula(k, p);
  rep.dominance = rep.numeric_lb >= rep.formula_lb - 1e-12;
  if (!rep.dominance) rep.diagnostics.push_back("numeric lower bound fell below the formula");

  rep.choi_min_eigenvalue = choi_min_eigenvalue(maps.u);
  rep.completely_positive = rep.choi_min_eigenvalue >= -1e-12;
  if (!rep.completely_positive) rep.diagnostics.push_back("Choi matrix of u is not positive semidefinite");
  rep.contraction_ratio = sampled_contraction_ratio(maps.u, p, opts.contraction_trials, opts.seed);
  rep.contraction = rep.contraction_ratio <= 1.0 + 1e-9;
  if (!rep.contraction) rep.diagnostics.push_back("sampled norm of u exceeds 1");

  rep.rigid_violation = rep.numeric_lb > 4.0 * rep.upper_w;
  rep.threshold_pass = rep.numeric_lb > 4.0 || rep.formula_lb > 4.0;
  return rep;
}

ScalarChain scalar_chain(std::int64_t k, PExponent p) {
  require_k(k);
  ScalarChain sc;
  sc.k = k;
  sc.p = p.value();
  // Explicit factorization of w: a = I, b = (k E_11)^{1/2} (p >= 2) or its p/4 power.
  sc.upper_w = p.value() >= 2.0 ? 1.0 : std::pow(static_cast<double>(k), 1.0 / p.value() - 0.5);
  sc.formula_lb = lower_bound_formula(k, p);
  sc.numeric_lb = diagonal_witness_bound(k, p);
  sc.rigid_violation = sc.numeric_lb > 4.0 * sc.upper_w;
  return sc;
}

std::vector<SweepRow> sweep(PExponent p, int kmin, int kmax, const PipelineOptions& opts) {
  if (kmin < 1 || kmax < kmin) throw InvalidInput("sweep: need 1 <= kmin <= kmax");
  std::vector<SweepRow> rows;
  for (int k = kmin; k <= kmax; ++k) {
    if (k <= opts.numeric_cap) {
      const CounterexampleReport r = verify_pipeline(k, p, opts);
      rows.push_back({k, p.value(), r.formula_lb, r.numeric_lb, r.upper_w, r.threshold_pass});
    } else {
      const ScalarChain sc = scalar_chain(k, p);
      rows.push_back({k, p.value(), sc.formula_lb, sc.numeric_lb, sc.upper_w, sc.numeric_lb > 4.0 || sc.formula_lb > 4.0});
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "k,p,formula_lb,numeric_lb,upper_w,threshold_pass\n";
  for (const auto& r : rows) {
    out << r.k << ',' << fmt(r.p) << ',' << fmt(r.formula_lb) << ',' << fmt(r.numeric_lb) << ','
        << fmt(r.upper_w) << ',' << (r.threshold_pass ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace nclp
