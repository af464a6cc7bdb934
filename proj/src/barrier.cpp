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

#include "nclp/barrier.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "nclp/errors.hpp"

namespace nclp::barrier {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Divided difference of x -> e x^{e-1} at (a, b), stable when a ~ b and for
// large e.
double divided_difference(double e, double a, double b) {
  if (a < b) std::swap(a, b);
  const double l = std::log(a / b);
  if (l < 1e-12) {
    const double m = 0.5 * (a + b);
    return e * (e - 1.0) * std::pow(m, e - 2.0);
  }
  return e * std::pow(a, e - 2.0) * std::expm1(-(e - 1.0) * l) / std::expm1(-l);
}

struct TermEval {
  double value = 0.0;
  RVec grad;
  Eigen::MatrixXd hess;
};

std::optional<TermEval> eval_term(const PowerTerm& t, const RVec& x, bool derivatives) {
  TermEval out;
  if (t.size == 0) {
    const double s = x[t.offset];
    if (!(s > 0.0)) return std::nullopt;
    out.value = t.weight * std::pow(s, t.power);
    if (derivatives) {
      out.grad = RVec::Constant(1, t.weight * t.power * std::pow(s, t.power - 1.0));
      out.hess = Eigen::MatrixXd::Constant(
          1, 1, t.weight * t.power * (t.power - 1.0) * std::pow(s, t.power - 2.0));
    }
    return out;
  }
  const int n = t.size;
  const Mat h = herm_from_coords(x, t.offset, n);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (!(es.eigenvalues().minCoeff() > 0.0)) return std::nullopt;
  // Work with eigenvalues scaled by the largest one so that large exponents
  // neither overflow nor underflow; every power of the scale is restored at
  // the end.
  const double scale = es.eigenvalues().maxCoeff();
  const RVec lam = es.eigenvalues() / scale;
  const double e = t.exponent;
  const double q = t.power;
  double f = 0.0;
  for (int i = 0; i < n; ++i) f += std::pow(lam[i], e);
  const double kappa = q / e;
  out.value = t.weight * std::pow(scale, q) * std::pow(f, kappa);
  if (!derivatives) return out;

  const Mat& v = es.eigenvectors();
  const int nb = n * n;
  RVec df(nb);
  std::vector<Mat> et(nb);
  RVec d1(n);
  for (int i = 0; i < n; ++i) d1[i] = e * std::pow(lam[i], e - 1.0);
  for (int b = 0; b < nb; ++b) {
    Mat m = Mat::Zero(n, n);
    for (const Entry& en : herm_basis_entries(n, b, 0, 0)) {
      m += en.coeff * v.row(en.row).adjoint() * v.row(en.col);
    }
    et[b] = m;
    double g = 0.0;
    for (int i = 0; i < n; ++i) g += d1[i] * m(i, i).real();
    df[b] = g;
  }
  Eigen::MatrixXd gamma(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gamma(i, j) = divided_difference(e, lam[i], lam[j]);
  }
  Eigen::MatrixXd d2(nb, nb);
  for (int a = 0; a < nb; ++a) {
    const Mat ga = gamma.cast<Complex>().cwiseProduct(et[a]);
    for (int b = a; b < nb; ++b) {
      const double val = ga.cwiseProduct(et[b].transpose()).sum().real();
      d2(a, b) = val;
      d2(b, a) = val;
    }
  }
  const double c1 = t.weight * kappa * std::pow(f, kappa - 1.0) * std::pow(scale, q - 1.0);
  const double c2 = t.weight * kappa * (kappa - 1.0) * std::pow(f, kappa - 2.0) * std::pow(scale, q - 2.0);
  out.grad = c1 * df;
  out.hess = (c1 / scale) * d2 + c2 * df * df.transpose();
  return out;
}

int term_width(const PowerTerm& t) { return t.size == 0 ? 1 : t.size * t.size; }

Mat assemble(const Lmi& lmi, const RVec& x) {
  Mat m = lmi.constant;
  for (std::size_t v = 0; v < lmi.terms.size(); ++v) {
    if (x[v] == 0.0) continue;
    for (const Entry& en : lmi.terms[v]) m(en.row, en.col) += x[v] * en.coeff;
  }
  return m;
}

struct Evaluation {
  double value = 0.0;
  double objective = 0.0;
  RVec grad;
  Eigen::MatrixXd hess;
  std::vector<Mat> inverses;
};

// Barrier function objective/mu - sum log det M_i. Empty when x is infeasible.
std::optional<Evaluation> evaluate(const Problem& pr, const RVec& x, double mu, bool derivatives) {
  Evaluation ev;
  const int nv = pr.num_vars;
  if (derivatives) {
    ev.grad = RVec::Zero(nv);
    ev.hess = Eigen::MatrixXd::Zero(nv, nv);
  }
  for (const PowerTerm& t : pr.objective) {
    auto te = eval_term(t, x, derivatives);
    if (!te) return std::nullopt;
    ev.objective += te->value;
    if (derivatives) {
      const int w = term_width(t);
      ev.grad.segment(t.offset, w) += te->grad / mu;
      ev.hess.block(t.offset, t.offset, w, w) += te->hess / mu;
    }
  }
  double logdet = 0.0;
  for (const Lmi& lmi : pr.lmis) {
    const Mat m = assemble(lmi, x);
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal().real();
    if (!(diag.minCoeff() > 0.0) || !diag.allFinite()) return std::nullopt;
    logdet += 2.0 * diag.array().log().sum();
    if (!derivatives) continue;
    const Mat inv = llt.solve(Mat::Identity(m.rows(), m.cols()));
    const int nt = static_cast<int>(lmi.terms.size());
    for (int a = 0; a < nt; ++a) {
      const auto& ea = lmi.terms[a];
      if (ea.empty()) continue;
      Complex g = 0.0;
      for (const Entry& en : ea) g += en.coeff * inv(en.col, en.row);
      ev.grad[a] -= g.real();
      for (int b = a; b < nt; ++b) {
        const auto& eb = lmi.terms[b];
        if (eb.empty()) continue;
        Complex h = 0.0;
        for (const Entry& e1 : ea) {
          for (const Entry& e2 : eb) {
            h += e1.coeff * inv(e1.col, e2.row) * e2.coeff * inv(e2.col, e1.row);
          }
        }
        ev.hess(a, b) += h.real();
        if (b != a) ev.hess(b, a) += h.real();
      }
    }
    ev.inverses.push_back(inv);
  }
  ev.value = ev.objective / mu - logdet;
  if (!std::isfinite(ev.value)) return std::nullopt;
  return ev;
}

}  // namespace

std::vector<Entry> herm_basis_entries(int n, int v, int row0, int col0) {
  if (v < n) return {Entry{row0 + v, col0 + v, Complex(1.0, 0.0)}};
  int idx = v - n;
  const int pair = idx / 2;
  const bool imag = (idx % 2) == 1;
  int i = 0;
  int remaining = pair;
  while (remaining >= n - 1 - i) {
    remaining -= n - 1 - i;
    ++i;
  }
  const int j = i + 1 + remaining;
  if (!imag) {
    return {Entry{row0 + i, col0 + j, Complex(kInvSqrt2, 0.0)},
            Entry{row0 + j, col0 + i, Complex(kInvSqrt2, 0.0)}};
  }
  return {Entry{row0 + i, col0 + j, Complex(0.0, kInvSqrt2)},
          Entry{row0 + j, col0 + i, Complex(0.0, -kInvSqrt2)}};
}

Mat herm_from_coords(const RVec& x, int offset, int n) {
  Mat h = Mat::Zero(n, n);
  for (int v = 0; v < n * n; ++v) {
    for (const Entry& en : herm_basis_entries(n, v, 0, 0)) h(en.row, en.col) += x[offset + v] * en.coeff;
  }
  return h;
}

void herm_to_coords(const Mat& h, RVec& x, int offset) {
  const int n = static_cast<int>(h.rows());
  for (int v = 0; v < n * n; ++v) {
    Complex s = 0.0;
    for (const Entry& en : herm_basis_entries(n, v, 0, 0)) s += en.coeff * h(en.col, en.row);
    x[offset + v] = s.real();
  }
}

double objective_value(const Problem& problem, const RVec& x) {
  double total = 0.0;
  for (const PowerTerm& t : problem.objective) {
    auto te = eval_term(t, x, false);
    if (!te) return std::numeric_limits<double>::infinity();
    total += te->value;
  }
  return total;
}

Result minimize(const Problem& pr, const RVec& x0, const Options& opt) {
  Result res;
  res.x = x0;
  double nu = 0.0;
  for (const Lmi& lmi : pr.lmis) nu += static_cast<double>(lmi.constant.rows());
  auto start = evaluate(pr, x0, 1.0, false);
  if (!start) throw NumericalDegeneracy("barrier: starting point is infeasible");
  double mu = std::max(start->objective, 1e-300);
  RVec x = x0;
  int steps = 0;
  bool budget_left = true;
  while (budget_left) {
    double objective = 0.0;
    for (int inner = 0; inner < opt.max_inner; ++inner) {
      auto ev = evaluate(pr, x, mu, true);
      objective = ev->objective;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(ev->hess);
      RVec dx = -ldlt.solve(ev->grad);
      if (!dx.allFinite()) {
        Eigen::MatrixXd reg = ev->hess;
        reg.diagonal().array() += 1e-12 * std::max(1.0, reg.diagonal().cwiseAbs().maxCoeff());
        dx = -reg.ldlt().solve(ev->grad);
      }
      const double dec = -ev->grad.dot(dx);
      if (!(dec > 0.0) || dec / 2.0 < opt.centering_tol) break;
      double t = 1.0;
      bool moved = false;
      while (t > 1e-14) {
        auto trial = evaluate(pr, x + t * dx, mu, false);
        if (trial && trial->value <= ev->value - 0.25 * t * dec) {
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
      x += t * dx;
      if (++steps >= opt.max_newton) {
        budget_left = false;
        break;
      }
    }
    if (auto centered = evaluate(pr, x, mu, true)) {
      objective = centered->objective;
      res.path.push_back({nu * mu / std::max(objective, 1e-300), std::move(centered->inverses)});
    }
    if (nu * mu < opt.gap_tol * std::max(objective, 1e-300)) {
      res.converged = budget_left;
      break;
    }
    mu *= opt.mu_factor;
  }
  auto fin = evaluate(pr, x, mu, true);
  res.x = x;
  res.objective = fin->objective;
  res.newton_steps = steps;
  res.lmi_inverses = std::move(fin->inverses);
  return res;
}

}  // namespace nclp::barrier
