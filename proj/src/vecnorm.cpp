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

#include "nclp/vecnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nclp/barrier.hpp"
#include "nclp/errors.hpp"

namespace nclp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEarlyExitGap = 1e-10;
constexpr double kRefineGap = 1e-9;
// Path points farther from optimal than this are not used as dual directions.
constexpr double kPathGapCutoff = 1e-3;
// Path directions tried during refinement.
constexpr double kRefinePathGap = 1e-6;
// Relative Gram eigenvalue below which the solver drops a direction.
constexpr double kSolverSupportTol = 1e-14;

void check_square_coords(int k, const std::vector<Mat>& coords) {
  if (k < 1) throw InvalidInput("VecElem: k must be positive");
  for (const Mat& c : coords) {
    if (c.rows() != k || c.cols() != k) throw InvalidInput("VecElem: coordinates must be k x k");
    require_finite(c, "VecElem");
  }
}

void require_same_shape(const VecElem& a, const VecElem& b) {
  if (a.k != b.k || a.n() != b.n()) throw InvalidInput("VecElem shapes differ");
}

VecElem orient(const VecElem& y, Side side) {
  return side == Side::kRCol ? opposite_transform(y) : y;
}

Mat gram_left(const std::vector<Mat>& ys) {
  Mat g = Mat::Zero(ys.front().rows(), ys.front().rows());
  for (const Mat& y : ys) g += y * y.adjoint();
  return g;
}

Mat gram_right(const std::vector<Mat>& ys) {
  Mat g = Mat::Zero(ys.front().cols(), ys.front().cols());
  for (const Mat& y : ys) g += y.adjoint() * y;
  return g;
}

// Exponents applied to R = a a^* and s = b^* b.
struct Form {
  bool one_sided = true;
  double left = kInf;
  double right = 1.0;
};

Form form_for(PExponent p, const NormOptions& opts) {
  const double pv = p.value();
  if (!std::isfinite(pv)) throw InvalidInput("factorization norms need a finite exponent");
  Form f;
  if (pv > 2.0 || (pv == 2.0 && !opts.two_sided_at_2)) {
    f.one_sided = true;
    f.left = kInf;
    f.right = pv / 2.0;
  } else {
    f.one_sided = false;
    f.left = pv == 2.0 ? kInf : pv / (2.0 - pv);
    f.right = 1.0;
  }
  return f;
}

double psd_norm(const Mat& h, double e) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return lp_norm(es.eigenvalues().cwiseMax(0.0), e);
}

Mat psd_power(const Mat& h, double e, double rank_tol) {
  const double top = lambda_max(h);
  if (!(top > 0.0)) return Mat::Zero(h.rows(), h.cols());
  return hermitian_function(h, [&](double x) { return x > 0.0 && x >= rank_tol * top ? std::pow(x, e) : 0.0; });
}

struct WitnessParts {
  double factor_norm = 0.0;  // sqrt(||R|| ||s||)
  double z_norm_sq = 0.0;    // lambda_max(sum z z^*)
  double padding = 0.0;
};

WitnessParts witness_parts(const std::vector<Mat>& ys, PExponent p, const Form& form, const FactorWitness& w,
                           double rank_tol) {
  const Eigen::Index k = ys.front().rows();
  if (w.left.rows() != k || w.left.cols() != k || w.right.rows() != ys.front().cols() ||
      w.right.cols() != ys.front().cols()) {
    throw InvalidInput("factor witness has the wrong shape");
  }
  WitnessParts out;
  // Eigenvalues below rank_tol relative to the largest are dropped from both
  // the factors and their inverses; whatever that loses is padded below.
  const Mat a = psd_power(w.left, 0.5, rank_tol);
  const Mat b = psd_power(w.right, 0.5, rank_tol);
  const Mat ai = psd_power(w.left, -0.5, rank_tol);
  const Mat bi = psd_power(w.right, -0.5, rank_tol);
  Mat zz = Mat::Zero(k, k);
  for (const Mat& y : ys) {
    const Mat z = ai * y * bi;
    zz += z * z.adjoint();
    out.padding += schatten_norm(y - a * z * b, p);
  }
  out.z_norm_sq = std::max(0.0, lambda_max(zz));
  out.factor_norm = std::sqrt(psd_norm(w.left, form.left) * psd_norm(w.right, form.right));
  return out;
}

double witness_value(const WitnessParts& parts) {
  return parts.factor_norm * std::sqrt(parts.z_norm_sq) + parts.padding;
}

// Rescales so that ||sum z z^*|| = 1 and ||R|| = ||s||.
FactorWitness normalize(const std::vector<Mat>& ys, PExponent p, const Form& form, FactorWitness w,
                        double rank_tol) {
  const WitnessParts parts = witness_parts(ys, p, form, w, rank_tol);
  if (parts.z_norm_sq > 0.0) w.left *= parts.z_norm_sq;
  const double nl = psd_norm(w.left, form.left);
  const double nr = psd_norm(w.right, form.right);
  if (nl > 0.0 && nr > 0.0) {
    const double c = std::sqrt(nr / nl);
    w.left *= c;
    w.right /= c;
  }
  return w;
}

std::vector<FactorWitness> structured_candidates(const std::vector<Mat>& ys, PExponent p, const Form& form,
                                                 double rank_tol) {
  const Eigen::Index k = ys.front().rows();
  const Mat gl = gram_left(ys);
  const Mat gr = gram_right(ys);
  std::vector<FactorWitness> out;
  if (form.one_sided) {
    out.push_back({Mat::Identity(k, k), gr});
  } else {
    const double pv = p.value();
    const double left_pow = pv == 2.0 ? 0.0 : pv * (2.0 - pv) / (2.0 * pv);  // p/q with 1/q = 1/p - 1/2
    out.push_back({psd_power(gl, left_pow, rank_tol), psd_power(gr, pv / 2.0, rank_tol)});
    out.push_back({support_projection(gl, rank_tol), gr});
  }
  return out;
}

// Data for the restricted, normalized convex program of one alpha norm.
struct Restricted {
  Mat u;  // k x L basis of supp(sum y y^*)
  Mat v;  // k x r basis of supp(sum y^* y)
  std::vector<Mat> ys;
  double scale = 1.0;
};

// Directions are dropped only when numerically zero: a component of relative
// size 1e-5 (Gram eigenvalue 1e-10) still moves the norm at that order.
Restricted restrict_support(const std::vector<Mat>& ys, double rank_tol) {
  Restricted r;
  const double tol = std::min(rank_tol, kSolverSupportTol);
  r.u = support_basis(gram_left(ys), tol);
  r.v = support_basis(gram_right(ys), tol);
  double sq = 0.0;
  for (const Mat& y : ys) {
    r.ys.push_back(r.u.adjoint() * y * r.v);
    sq += r.ys.back().squaredNorm();
  }
  r.scale = std::sqrt(sq);
  for (Mat& y : r.ys) y /= r.scale;
  return r;
}

// Variable blocks describing one factor pair inside a barrier problem.
struct FactorBlock {
  int left_offset = 0;   // scalar t (one-sided) or L x L block
  int left_size = 0;     // 0 for the scalar case
  int spectral_offset = -1;  // epigraph scalar when the left exponent is infinite on a block
  int right_offset = 0;
  int right_size = 0;
};

// Adds the variables, objective terms and the block diagonal of
// [[R, *], [*, I (x) s]] for one factor pair to an LMI of size L + N r.
FactorBlock add_factor_block(barrier::Problem& pr, barrier::Lmi& lmi, const Form& form, int L, int r, int N,
                             double power) {
  FactorBlock fb;
  auto grow = [&](int count) {
    const int off = pr.num_vars;
    pr.num_vars += count;
    return off;
  };
  if (form.one_sided) {
    fb.left_offset = grow(1);
    fb.left_size = 0;
  } else {
    fb.left_offset = grow(L * L);
    fb.left_size = L;
    if (std::isinf(form.left)) fb.spectral_offset = grow(1);
  }
  fb.right_offset = grow(r * r);
  fb.right_size = r;
  lmi.terms.resize(pr.num_vars);
  if (fb.left_size == 0) {
    for (int i = 0; i < L; ++i) lmi.terms[fb.left_offset].push_back({i, i, Complex(1.0, 0.0)});
    pr.objective.push_back({fb.left_offset, 0, 1.0, power, 0.5});
  } else {
    for (int v = 0; v < L * L; ++v) lmi.terms[fb.left_offset + v] = barrier::herm_basis_entries(L, v, 0, 0);
    if (fb.spectral_offset >= 0) {
      // t I - R > 0 with objective t^p.
      barrier::Lmi epi;
      epi.constant = Mat::Zero(L, L);
      epi.terms.resize(pr.num_vars);
      for (int i = 0; i < L; ++i) epi.terms[fb.spectral_offset].push_back({i, i, Complex(1.0, 0.0)});
      for (int v = 0; v < L * L; ++v) {
        auto en = barrier::herm_basis_entries(L, v, 0, 0);
        for (auto& e : en) e.coeff = -e.coeff;
        epi.terms[fb.left_offset + v] = en;
      }
      pr.lmis.push_back(std::move(epi));
      pr.objective.push_back({fb.spectral_offset, 0, 1.0, power, 0.5});
    } else {
      pr.objective.push_back({fb.left_offset, L, form.left, power, 0.5});
    }
  }
  for (int v = 0; v < r * r; ++v) {
    auto& dst = lmi.terms[fb.right_offset + v];
    for (int n = 0; n < N; ++n) {
      auto en = barrier::herm_basis_entries(r, v, L + n * r, L + n * r);
      dst.insert(dst.end(), en.begin(), en.end());
    }
  }
  pr.objective.push_back({fb.right_offset, r, form.right, power, 0.5});
  return fb;
}

void init_factor_block(RVec& x, const FactorBlock& fb, double c) {
  if (fb.left_size == 0) {
    x[fb.left_offset] = c;
  } else {
    barrier::herm_to_coords(Mat::Identity(fb.left_size, fb.left_size) * c, x, fb.left_offset);
    if (fb.spectral_offset >= 0) x[fb.spectral_offset] = c + 1.0;
  }
  barrier::herm_to_coords(Mat::Identity(fb.right_size, fb.right_size), x, fb.right_offset);
}

// Lifts a restricted solution back to k x k witness matrices.
FactorWitness lift_factor_block(const RVec& x, const FactorBlock& fb, const Mat& u, const Mat& v, double scale) {
  const Eigen::Index k = u.rows();
  FactorWitness w;
  if (fb.left_size == 0) {
    w.left = Mat::Identity(k, k) * (x[fb.left_offset] * scale);
  } else {
    w.left = u * barrier::herm_from_coords(x, fb.left_offset, fb.left_size) * u.adjoint() * scale;
  }
  w.right = v * barrier::herm_from_coords(x, fb.right_offset, fb.right_size) * v.adjoint() * scale;
  return w;
}

// Places the constant coordinate blocks Y_n at (0, L + n r) and their adjoints.
void add_constant_coords(barrier::Lmi& lmi, const std::vector<Mat>& ys, int L, int r) {
  for (std::size_t n = 0; n < ys.size(); ++n) {
    const int c0 = L + static_cast<int>(n) * r;
    lmi.constant.block(0, c0, L, r) += ys[n];
    lmi.constant.block(c0, 0, r, L) += ys[n].adjoint();
  }
}

double initial_left(const std::vector<Mat>& ys) {
  if (ys.empty() || ys.front().size() == 0) return 1.0;
  return 2.0 * std::max(0.0, lambda_max(gram_left(ys))) + 1.0;
}

// Dual directions y'_n = V Z_n U^* read off the off-diagonal block of M^{-1}.
VecElem dual_from_inverse(const Mat& inv, const Mat& u, const Mat& v, int N, int k) {
  const int L = static_cast<int>(u.cols());
  const int r = static_cast<int>(v.cols());
  VecElem out = VecElem::zeros(k, N);
  for (int n = 0; n < N; ++n) out.coords[n] = v * inv.block(L + n * r, 0, r, L) * u.adjoint();
  const double f = out.frobenius();
  if (f > 0.0) out *= 1.0 / f;
  return out;
}

// The diagonal blocks of M^{-1} factor the dual direction: with A the top
// left block and C the sum of the N lower diagonal blocks, the dual element
// is V C^{1/2} z' A^{1/2} U^* with sum z' z'^* <= 1.
FactorWitness dual_factor_from_inverse(const Mat& inv, const Mat& u, const Mat& v, int N) {
  const int L = static_cast<int>(u.cols());
  const int r = static_cast<int>(v.cols());
  Mat c = Mat::Zero(r, r);
  for (int n = 0; n < N; ++n) c += inv.block(L + n * r, L + n * r, r, r);
  return {hermitian_part(v * c * v.adjoint()), hermitian_part(u * inv.block(0, 0, L, L) * u.adjoint())};
}

struct SolverOutcome {
  FactorWitness witness;
  /// Dual directions along the central path, the final one last.
  std::vector<VecElem> duals;
  std::vector<FactorWitness> dual_factors;
  std::vector<double> dual_gaps;
  int iterations = 0;
  bool converged = false;
};

barrier::Options barrier_options(const NormOptions& opts) {
  barrier::Options bo;
  bo.gap_tol = opts.gap_tol;
  bo.max_newton = opts.max_iters;
  return bo;
}

SolverOutcome solve_alpha(const std::vector<Mat>& ys, PExponent p, const Form& form, const NormOptions& opts) {
  const int k = static_cast<int>(ys.front().rows());
  const int N = static_cast<int>(ys.size());
  const Restricted rs = restrict_support(ys, opts.rank_tol);
  const int L = static_cast<int>(rs.u.cols());
  const int r = static_cast<int>(rs.v.cols());
  barrier::Problem pr;
  barrier::Lmi lmi;
  lmi.constant = Mat::Zero(L + N * r, L + N * r);
  add_constant_coords(lmi, rs.ys, L, r);
  const FactorBlock fb = add_factor_block(pr, lmi, form, L, r, N, p.value());
  for (auto& other : pr.lmis) other.terms.resize(pr.num_vars);
  lmi.terms.resize(pr.num_vars);
  pr.lmis.insert(pr.lmis.begin(), std::move(lmi));
  RVec x0 = RVec::Zero(pr.num_vars);
  init_factor_block(x0, fb, initial_left(rs.ys));
  const barrier::Result res = barrier::minimize(pr, x0, barrier_options(opts));
  SolverOutcome out;
  out.witness = lift_factor_block(res.x, fb, rs.u, rs.v, rs.scale);
  for (const auto& pt : res.path) {
    if (pt.relative_gap > kPathGapCutoff) continue;
    out.duals.push_back(dual_from_inverse(pt.lmi_inverses.front(), rs.u, rs.v, N, k));
    out.dual_factors.push_back(dual_factor_from_inverse(pt.lmi_inverses.front(), rs.u, rs.v, N));
    out.dual_gaps.push_back(pt.relative_gap);
  }
  out.duals.push_back(dual_from_inverse(res.lmi_inverses.front(), rs.u, rs.v, N, k));
  out.dual_factors.push_back(dual_factor_from_inverse(res.lmi_inverses.front(), rs.u, rs.v, N));
  out.dual_gaps.push_back(0.0);
  out.iterations = res.newton_steps;
  out.converged = res.converged;
  return out;
}

std::vector<Complex> diagonal_coefficients(const VecElem& y) {
  std::vector<Complex> lam(y.k);
  for (int i = 0; i < y.k; ++i) lam[i] = y.coords[i](i, i);
  return lam;
}

std::vector<VecElem> auto_pool(const VecElem& y, PExponent p) {
  std::vector<VecElem> pool;
  if (y.k == y.n()) {
    const auto lam = diagonal_coefficients(y);
    if (std::any_of(lam.begin(), lam.end(), [](Complex c) { return c != 0.0; })) {
      pool.push_back(diagonal_dual_witness(lam, p));
    }
  }
  VecElem adj = y;
  for (Mat& c : adj.coords) c.adjointInPlace();
  pool.push_back(std::move(adj));
  return pool;
}

}  // namespace

VecElem::VecElem(int k_, std::vector<Mat> coords_) : k(k_), coords(std::move(coords_)) {
  check_square_coords(k, coords);
}

VecElem VecElem::zeros(int k, int n) {
  if (k < 1 || n < 0) throw InvalidInput("VecElem::zeros: bad shape");
  return VecElem(k, std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(k, k)));
}

double VecElem::frobenius() const {
  double s = 0.0;
  for (const Mat& c : coords) s += c.squaredNorm();
  return std::sqrt(s);
}

VecElem& VecElem::operator+=(const VecElem& other) {
  require_same_shape(*this, other);
  for (int n = 0; n < this->n(); ++n) coords[n] += other.coords[n];
  return *this;
}

VecElem& VecElem::operator-=(const VecElem& other) {
  require_same_shape(*this, other);
  for (int n = 0; n < this->n(); ++n) coords[n] -= other.coords[n];
  return *this;
}

VecElem& VecElem::operator*=(Complex s) {
  for (Mat& c : coords) c *= s;
  return *this;
}

VecElem operator+(VecElem a, const VecElem& b) { return a += b; }
VecElem operator-(VecElem a, const VecElem& b) { return a -= b; }
VecElem operator*(Complex s, VecElem a) { return a *= s; }

const char* side_name(Side side) { return side == Side::kEllRow ? "ELL_ROW" : "R_COL"; }

double min_tensor_row_norm(const VecElem& z) {
  if (z.n() == 0) return 0.0;
  return std::sqrt(std::max(0.0, lambda_max(gram_left(z.coords))));
}

double min_tensor_col_norm(const VecElem& z) {
  if (z.n() == 0) return 0.0;
  return std::sqrt(std::max(0.0, lambda_max(gram_right(z.coords))));
}

Complex pairing(const VecElem& y, const VecElem& y2) {
  require_same_shape(y, y2);
  Complex s = 0.0;
  for (int n = 0; n < y.n(); ++n) s += trace_pairing(y.coords[n], y2.coords[n]);
  return s;
}

VecElem opposite_transform(const VecElem& y) {
  VecElem out = y;
  for (Mat& c : out.coords) c.transposeInPlace();
  return out;
}

double evaluate_witness(const VecElem& y, PExponent p, Side side, const FactorWitness& w, double rank_tol) {
  if (y.n() == 0) return 0.0;
  const VecElem yy = orient(y, side);
  const Form form = form_for(p, NormOptions{});
  return witness_value(witness_parts(yy.coords, p, form, w, rank_tol));
}

namespace {

// With all_duals every sufficiently late path direction is returned.
UpperBound upper_impl(const VecElem& y, PExponent p, Side side, const NormOptions& opts, bool all_duals) {
  const Form form = form_for(p, opts);
  UpperBound out;
  if (y.n() == 0 || y.is_zero()) {
    out.witness = {Mat::Zero(y.k, y.k), Mat::Zero(y.k, y.k)};
    return out;
  }
  const VecElem yy = orient(y, side);
  const auto& ys = yy.coords;

  std::vector<FactorWitness> candidates = structured_candidates(ys, p, form, opts.rank_tol);
  candidates.insert(candidates.end(), opts.hints.begin(), opts.hints.end());
  if (opts.combine_hints && !opts.hints.empty()) {
    FactorWitness sum{Mat::Zero(y.k, y.k), Mat::Zero(y.k, y.k)};
    for (const auto& h : opts.hints) {
      sum.left += h.left;
      sum.right += h.right;
    }
    candidates.push_back(sum);
  }
  if (opts.use_solver) {
    try {
      SolverOutcome so = solve_alpha(ys, p, form, opts);
      candidates.push_back(so.witness);
      out.iterations = so.iterations;
      out.converged = so.converged;
      // Late path points are closest to optimal but least accurate, so keep
      // the final direction and the one whose own factorization already
      // gives the best ratio.
      const VecElem yv(y.k, ys);
      const PExponent pc = conjugate(p);
      std::size_t best = so.duals.size() - 1;
      double best_ratio = -1.0;
      for (std::size_t i = 0; i < so.duals.size(); ++i) {
        const double den = evaluate_witness(so.duals[i], pc, Side::kEllRow, so.dual_factors[i], opts.rank_tol);
        const double ratio = den > 0.0 ? std::abs(pairing(yv, so.duals[i])) / den : 0.0;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = i;
        }
      }
      for (std::size_t i = 0; i < so.duals.size(); ++i) {
        if (i + 1 == so.duals.size() || i == best || (all_duals && so.dual_gaps[i] <= kRefinePathGap)) {
          out.dual_candidates.push_back(orient(so.duals[i], side));
          out.dual_factors.push_back(so.dual_factors[i]);
        }
      }
    } catch (const NumericalDegeneracy&) {
      out.converged = false;
    }
  }
  out.value = kInf;
  for (const auto& c : candidates) {
    const double v = witness_value(witness_parts(ys, p, form, c, opts.rank_tol));
    if (v < out.value) {
      out.value = v;
      out.witness = c;
    }
  }
  out.witness = normalize(ys, p, form, out.witness, opts.rank_tol);
  return out;
}

}  // namespace

UpperBound alpha_upper(const VecElem& y, PExponent p, Side side, const NormOptions& opts) {
  return upper_impl(y, p, side, opts, false);
}

namespace {

// Pool entry i may come with a factorization hint for its dual norm.
LowerBound lower_from_pool(const VecElem& y, PExponent p, Side side, std::span<const VecElem> dual_pool,
                           std::span<const FactorWitness> factors, const NormOptions& opts) {
  LowerBound out;
  out.dual_witness = VecElem::zeros(y.k, y.n());
  if (dual_pool.empty()) return out;
  const PExponent pc = conjugate(p);
  NormOptions inner = opts;
  inner.combine_hints = false;
  for (std::size_t i = 0; i < dual_pool.size(); ++i) {
    const VecElem& d = dual_pool[i];
    require_same_shape(y, d);
    if (d.is_zero()) continue;
    const double num = std::abs(pairing(y, d));
    if (num == 0.0) continue;
    inner.hints.clear();
    if (i < factors.size()) inner.hints.push_back(factors[i]);
    const double den = alpha_upper(d, pc, side, inner).value;
    if (den > 0.0 && num / den > out.value) {
      out.value = num / den;
      out.dual_witness = d;
    }
  }
  return out;
}

}  // namespace

LowerBound alpha_lower(const VecElem& y, PExponent p, Side side, std::span<const VecElem> dual_pool,
                       const NormOptions& opts) {
  return lower_from_pool(y, p, side, dual_pool, {}, opts);
}

NormCertificate alpha_certify(const VecElem& y, PExponent p, Side side, const NormOptions& opts) {
  NormCertificate cert;
  if (y.n() == 0 || y.is_zero()) {
    cert.factor_witness = {Mat::Zero(y.k, y.k), Mat::Zero(y.k, y.k)};
    cert.dual_witness = VecElem::zeros(y.k, y.n());
    return cert;
  }
  NormOptions quick = opts;
  quick.use_solver = false;
  const UpperBound u0 = alpha_upper(y, p, side, quick);
  const auto pool0 = auto_pool(y, p);
  const LowerBound l0 = alpha_lower(y, p, side, pool0, quick);
  cert.upper = u0.value;
  cert.lower = l0.value;
  cert.factor_witness = u0.witness;
  cert.dual_witness = l0.dual_witness;
  cert.converged = true;
  if (!opts.use_solver || cert.upper - cert.lower <= kEarlyExitGap * cert.upper) return cert;

  const UpperBound u1 = alpha_upper(y, p, side, opts);
  cert.iterations = u1.iterations;
  cert.converged = u1.converged;
  if (u1.value < cert.upper) {
    cert.upper = u1.value;
    cert.factor_witness = u1.witness;
  }
  const LowerBound l1 = lower_from_pool(y, p, side, u1.dual_candidates, u1.dual_factors, opts);
  if (l1.value > cert.lower) {
    cert.lower = l1.value;
    cert.dual_witness = l1.dual_witness;
  }
  // The dual direction is only as accurate as the final barrier parameter;
  // one tighter solve usually closes a stubborn gap.
  if (cert.upper - cert.lower > kRefineGap * cert.upper) {
    NormOptions tight = opts;
    tight.gap_tol = opts.gap_tol * 1e-2;
    const UpperBound u2 = upper_impl(y, p, side, tight, true);
    cert.iterations += u2.iterations;
    if (u2.value < cert.upper) {
      cert.upper = u2.value;
      cert.factor_witness = u2.witness;
    }
    const LowerBound l2 = lower_from_pool(y, p, side, u2.dual_candidates, u2.dual_factors, opts);
    if (l2.value > cert.lower) {
      cert.lower = l2.value;
      cert.dual_witness = l2.dual_witness;
    }
  }
  return cert;
}

LowerBound beta_lower(const VecElem& y, PExponent p, std::span<const VecElem> dual_pool, const NormOptions& opts) {
  LowerBound out;
  out.dual_witness = VecElem::zeros(y.k, y.n());
  const PExponent pc = conjugate(p);
  NormOptions inner = opts;
  inner.hints.clear();
  inner.combine_hints = false;
  for (const VecElem& d : dual_pool) {
    require_same_shape(y, d);
    if (d.is_zero()) continue;
    const double num = std::abs(pairing(y, d));
    if (num == 0.0) continue;
    const double ul = alpha_upper(d, pc, Side::kEllRow, inner).value;
    const double ur = alpha_upper(d, pc, Side::kRCol, inner).value;
    const double den = lp_norm(Eigen::Vector2d(ul, ur), pc.value());
    if (den > 0.0 && num / den > out.value) {
      out.value = num / den;
      out.dual_witness = d;
    }
  }
  return out;
}

NormCertificate beta_certify(const VecElem& y, PExponent p, const NormOptions& opts) {
  NormCertificate cert;
  const int k = y.k;
  const int N = y.n();
  cert.factor_witness = {Mat::Zero(k, k), Mat::Zero(k, k)};
  cert.col_witness = cert.factor_witness;
  cert.split = VecElem::zeros(k, N);
  cert.dual_witness = VecElem::zeros(k, N);
  if (N == 0 || y.is_zero()) return cert;
  const Form form = form_for(p, NormOptions{});
  const double pv = p.value();

  // Trivial splits from closed-form candidates.
  NormOptions quick = opts;
  quick.use_solver = false;
  quick.hints.clear();
  const UpperBound ql = alpha_upper(y, p, Side::kEllRow, quick);
  const UpperBound qr = alpha_upper(y, p, Side::kRCol, quick);
  if (ql.value <= qr.value) {
    cert.upper = ql.value;
    cert.split = y;
    cert.factor_witness = ql.witness;
  } else {
    cert.upper = qr.value;
    cert.col_witness = qr.witness;
  }

  std::vector<VecElem> pool = auto_pool(y, p);
  if (opts.use_solver) {
    // Joint program over the split y0 and both factor pairs.
    const Restricted rs = restrict_support(y.coords, opts.rank_tol);
    const int L = static_cast<int>(rs.u.cols());
    const int r = static_cast<int>(rs.v.cols());
    barrier::Problem pr;
    const int y0_offset = 0;
    pr.num_vars = 2 * N * L * r;
    barrier::Lmi left;
    left.constant = Mat::Zero(L + N * r, L + N * r);
    barrier::Lmi right;
    right.constant = Mat::Zero(r + N * L, r + N * L);
    std::vector<Mat> yt;
    for (const Mat& c : rs.ys) yt.push_back(c.transpose());
    add_constant_coords(right, yt, r, L);
    const FactorBlock fl = add_factor_block(pr, left, form, L, r, N, pv);
    const FactorBlock fr = add_factor_block(pr, right, form, r, L, N, pv);
    left.terms.resize(pr.num_vars);
    right.terms.resize(pr.num_vars);
    for (int n = 0; n < N; ++n) {
      for (int i = 0; i < L; ++i) {
        for (int j = 0; j < r; ++j) {
          const int var = y0_offset + ((n * L + i) * r + j) * 2;
          const int lc = L + n * r + j;
          const int rc = r + n * L + i;
          left.terms[var] = {{i, lc, Complex(1, 0)}, {lc, i, Complex(1, 0)}};
          left.terms[var + 1] = {{i, lc, Complex(0, 1)}, {lc, i, Complex(0, -1)}};
          right.terms[var] = {{j, rc, Complex(-1, 0)}, {rc, j, Complex(-1, 0)}};
          right.terms[var + 1] = {{j, rc, Complex(0, -1)}, {rc, j, Complex(0, 1)}};
        }
      }
    }
    for (auto& other : pr.lmis) other.terms.resize(pr.num_vars);
    pr.lmis.insert(pr.lmis.begin(), std::move(right));
    pr.lmis.insert(pr.lmis.begin(), std::move(left));

    RVec x0 = RVec::Zero(pr.num_vars);
    std::vector<Mat> half;
    for (const Mat& c : rs.ys) half.push_back(c * 0.5);
    std::vector<Mat> half_t;
    for (const Mat& c : half) half_t.push_back(c.transpose());
    for (int n = 0; n < N; ++n) {
      for (int i = 0; i < L; ++i) {
        for (int j = 0; j < r; ++j) {
          const int var = y0_offset + ((n * L + i) * r + j) * 2;
          x0[var] = half[n](i, j).real();
          x0[var + 1] = half[n](i, j).imag();
        }
      }
    }
    init_factor_block(x0, fl, initial_left(half));
    init_factor_block(x0, fr, initial_left(half_t));
    try {
      const barrier::Result res = barrier::minimize(pr, x0, barrier_options(opts));
      cert.iterations = res.newton_steps;
      cert.converged = res.converged;
      VecElem y0 = VecElem::zeros(k, N);
      for (int n = 0; n < N; ++n) {
        Mat c(L, r);
        for (int i = 0; i < L; ++i) {
          for (int j = 0; j < r; ++j) {
            const int var = y0_offset + ((n * L + i) * r + j) * 2;
            c(i, j) = Complex(res.x[var], res.x[var + 1]);
          }
        }
        y0.coords[n] = rs.u * c * rs.v.adjoint() * rs.scale;
      }
      const FactorWitness wl = lift_factor_block(res.x, fl, rs.u, rs.v, rs.scale);
      const FactorWitness wr = lift_factor_block(res.x, fr, rs.v.conjugate(), rs.u.conjugate(), rs.scale);
      const VecElem y1 = y - y0;
      const double ul = evaluate_witness(y0, p, Side::kEllRow, wl, opts.rank_tol);
      const double ur = evaluate_witness(y1, p, Side::kRCol, wr, opts.rank_tol);
      const double joint = lp_norm(Eigen::Vector2d(ul, ur), pv);
      if (joint < cert.upper) {
        cert.upper = joint;
        cert.split = y0;
        cert.factor_witness = wl;
        cert.col_witness = wr;
      }
      pool.push_back(dual_from_inverse(res.lmi_inverses[0], rs.u, rs.v, N, k));
      const VecElem dr = dual_from_inverse(res.lmi_inverses[1], rs.v.conjugate(), rs.u.conjugate(), N, k);
      pool.push_back(opposite_transform(dr));
    } catch (const NumericalDegeneracy&) {
      cert.converged = false;
    }
  }
  const LowerBound lb = beta_lower(y, p, pool, opts);
  cert.lower = lb.value;
  cert.dual_witness = lb.dual_witness;
  return cert;
}

VecElem project_diagonal(const VecElem& y) {
  if (y.k != y.n()) throw InvalidInput("project_diagonal: requires k = N");
  VecElem out = VecElem::zeros(y.k, y.n());
  for (int i = 0; i < y.k; ++i) out.coords[i](i, i) = y.coords[i](i, i);
  return out;
}

VecElem diagonal_element(std::span<const Complex> lambda) {
  const int k = static_cast<int>(lambda.size());
  if (k < 1) throw InvalidInput("diagonal_element: empty coefficient list");
  VecElem out = VecElem::zeros(k, k);
  for (int i = 0; i < k; ++i) out.coords[i](i, i) = lambda[i];
  return out;
}

VecElem diagonal_dual_witness(std::span<const Complex> lambda, PExponent p) {
  std::vector<Complex> mu(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double m = std::abs(lambda[i]);
    mu[i] = m == 0.0 ? Complex(0.0) : std::conj(lambda[i]) * std::pow(m, p.value() - 2.0);
  }
  return diagonal_element(mu);
}

double diagonal_closed_form(std::span<const Complex> lambda, PExponent p) {
  RVec m(static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t i = 0; i < lambda.size(); ++i) m[static_cast<Eigen::Index>(i)] = std::abs(lambda[i]);
  return lp_norm(m, p.value());
}

RowStack row_stack_factorize(std::span<const Mat> d_list, PExponent p, double rtol) {
  if (d_list.empty()) throw InvalidInput("row_stack_factorize: empty list");
  const Eigen::Index rows = d_list.front().rows();
  const Eigen::Index cols = d_list.front().cols();
  Mat g = Mat::Zero(cols, cols);
  for (const Mat& d : d_list) {
    if (d.rows() != rows || d.cols() != cols) throw InvalidInput("row_stack_factorize: unequal shapes");
    require_finite(d, "row_stack_factorize");
    g += d.adjoint() * d;
  }
  RowStack out;
  out.d = psd_sqrt(g);
  out.d_norm = schatten_norm(out.d, p);
  const Mat q = support_projection(out.d);
  const Mat di = pseudo_inverse(out.d);
  Mat sum = Mat::Zero(cols, cols);
  const double scale = std::max(1.0, out.d.norm());
  for (const Mat& d : d_list) {
    Mat w = d * di;
    if ((w * out.d - d).norm() > rtol * scale || (w * q - w).norm() > rtol * std::max(1.0, w.norm())) {
      throw NumericalDegeneracy("row_stack_factorize: reconstruction failed");
    }
    sum += w.adjoint() * w;
    out.w.push_back(std::move(w));
  }
  if ((sum - q).norm() > rtol * std::max(1.0, q.norm())) {
    throw NumericalDegeneracy("row_stack_factorize: sum w_j^* w_j differs from the support projection");
  }
  return out;
}

}  // namespace nclp
