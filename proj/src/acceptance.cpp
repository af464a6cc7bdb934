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

#include "nclp/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nclp/counterexample.hpp"
#include "nclp/cpmaps.hpp"
#include "nclp/random.hpp"
#include "nclp/schatten.hpp"
#include "nclp/vecnorm.hpp"
#include "nclp/yeadon.hpp"

namespace nclp {
namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Independent evaluation of the closed-form lower bound in extended precision.
double formula_oracle(std::int64_t k, double p) {
  const long double kd = static_cast<long double>(k);
  const long double pl = p;
  const long double a = 2.0L * std::pow(kd, -1.0L / (2.0L * pl)) + 1.0L + std::pow(kd, -1.0L / pl);
  const long double b = (kd - 1.0L) * std::pow(kd, -0.5L);
  return static_cast<double>(std::pow(std::pow(a, pl) + b, 1.0L / pl) / 8.0L);
}

// Raw factorization value ||c||_inf ||z||_min ||d||_p (p >= 2) with z = c^{-1} y d^{-1}.
double raw_factorization_value(const VecElem& y, const Mat& c, const Mat& d, PExponent p) {
  const Mat ci = c.inverse();
  const Mat di = d.inverse();
  Mat zz = Mat::Zero(y.k, y.k);
  for (const Mat& yn : y.coords) {
    const Mat z = ci * yn * di;
    zz += z * z.adjoint();
  }
  const double v = singular_values(c)[0] * std::sqrt(std::max(0.0, lambda_max(zz))) * schatten_norm(d, p);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

// Random search over raw factorizations: global samples, then a (1+1)
// evolution strategy around the best one. Uses only schatten-level tools.
double random_factorization_search(const VecElem& y, PExponent p, int samples, Rng& rng) {
  const int k = y.k;
  double best = std::numeric_limits<double>::infinity();
  Mat bc = Mat::Identity(k, k);
  Mat bd = Mat::Identity(k, k);
  const int global = samples / 5;
  for (int s = 0; s < global; ++s) {
    const Mat c = rng.gaussian(k, k);
    const Mat d = rng.gaussian(k, k);
    const double v = raw_factorization_value(y, c, d, p);
    if (v < best) {
      best = v;
      bc = c;
      bd = d;
    }
  }
  double sigma = 0.3;
  for (int s = global; s < samples; ++s) {
    const Mat c = bc + sigma * bc.norm() / k * rng.gaussian(k, k);
    const Mat d = bd + sigma * bd.norm() / k * rng.gaussian(k, k);
    const double v = raw_factorization_value(y, c, d, p);
    if (v < best) {
      best = v;
      bc = c / c.norm();
      bd = d / d.norm();
      sigma *= 1.5;
    } else {
      sigma *= std::pow(1.5, -0.25);
    }
    sigma = std::clamp(sigma, 1e-9, 1.0);
  }
  return best;
}

CriterionResult criterion1(std::uint64_t seed) {
  CriterionResult r{1, "schatten exactness and Holder", true, "", 0};
  double worst_identity = 0.0;
  for (int k = 1; k <= 8; ++k) {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const double err = std::abs(schatten_norm(Mat::Identity(k, k), PExponent(p)) - std::pow(k, 1.0 / p));
      worst_identity = std::max(worst_identity, err);
    }
  }
  Rng rng(seed);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    double p = 0;
    double q = 0;
    do {
      p = rng.uniform(1.05, 8.0);
      q = rng.uniform(1.05, 8.0);
    } while (1.0 / p + 1.0 / q > 1.0);
    const double s = 1.0 / (1.0 / p + 1.0 / q);
    const int k = rng.integer(1, 5);
    const int m = rng.integer(1, 5);
    const Mat a = rng.gaussian(k, m);
    const Mat c = rng.gaussian(m, k);
    const double lhs = lp_norm(singular_values(a * c), s);
    if (lhs > schatten_norm(a, PExponent(p)) * schatten_norm(c, PExponent(q)) + 1e-10) ++violations;
  }
  r.pass = worst_identity <= 1e-12 && violations == 0;
  r.detail = "max |‖I_k‖_p - k^(1/p)| = " + num(worst_identity) + ", Holder violations " +
             std::to_string(violations) + "/1000";
  return r;
}

CriterionResult criterion2(std::uint64_t seed) {
  CriterionResult r{2, "diagonal closed form", true, "", 0};
  Rng rng(seed + 2);
  double worst_upper = 0.0;
  double worst_lower = 0.0;
  bool below = false;
  int cases = 0;
  for (int k = 2; k <= 6; ++k) {
    for (double pv : {2.5, 3.0, 4.0}) {
      const PExponent p(pv);
      for (int t = 0; t < 10; ++t) {
        std::vector<Complex> lam(k);
        for (auto& l : lam) l = Complex(rng.normal(), rng.normal());
        const double exact = diagonal_closed_form(lam, p);
        const NormCertificate c = alpha_certify(diagonal_element(lam), p, Side::kEllRow);
        worst_upper = std::max(worst_upper, (c.upper - exact) / exact);
        worst_lower = std::max(worst_lower, std::abs(c.lower - exact) / exact);
        below = below || c.upper < exact * (1.0 - 1e-12);
        ++cases;
      }
    }
  }
  r.pass = !below && worst_upper <= 1e-3 && worst_lower <= 1e-9;
  r.detail = std::to_string(cases) + " elements; max relative upper excess " + num(worst_upper) +
             ", max relative lower error " + num(worst_lower);
  return r;
}

CriterionResult criterion3() {
  CriterionResult r{3, "witness norm", true, "", 0};
  double worst = 0.0;
  bool ok = true;
  for (int k = 2; k <= 6; ++k) {
    for (double pv : {3.0, 4.0}) {
      const NormCertificate c = alpha_certify(witness_w(k), PExponent(pv), Side::kEllRow);
      ok = ok && c.upper >= 1.0 - 1e-15 && c.upper - 1.0 <= 1e-9 && c.lower <= 1.0 + 1e-15 && 1.0 - c.lower <= 1e-9;
      worst = std::max({worst, std::abs(c.upper - 1.0), std::abs(c.lower - 1.0)});
    }
  }
  r.pass = ok;
  r.detail = "max |bound - 1| = " + num(worst);
  return r;
}

CriterionResult criterion4() {
  CriterionResult r{4, "closed-form images", true, "", 0};
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) {
    for (double pv : {2.5, 3.0, 4.0}) {
      const PExponent p(pv);
      const CounterexampleMaps maps = build_counterexample_maps(k, p);
      const ClosedFormImages cf = closed_form_images(k, p);
      const VecElem lhs = amplify_apply(maps.u, witness_w(k));
      const VecElem rhs = Complex(0.25) * (cf.u1w + cf.u2w + cf.u3w + cf.u4w);
      for (int n = 0; n < k; ++n) worst = std::max(worst, (lhs.coords[n] - rhs.coords[n]).cwiseAbs().maxCoeff());
    }
  }
  r.pass = worst <= 1e-14;
  r.detail = "max entry difference " + num(worst);
  return r;
}

CriterionResult criterion5(std::uint64_t seed) {
  CriterionResult r{5, "counterexample chain", true, "", 0};
  bool ok = true;
  double worst_formula = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  PipelineOptions po;
  po.seed = seed;
  for (int k = 2; k <= 6; ++k) {
    for (double pv : {3.0, 4.0}) {
      const CounterexampleReport rep = verify_pipeline(k, PExponent(pv), po);
      ok = ok && rep.numeric_lb >= rep.formula_lb - 1e-12;
      min_margin = std::min(min_margin, rep.numeric_lb - rep.formula_lb);
      worst_formula = std::max(worst_formula, std::abs(rep.formula_lb - formula_oracle(k, pv)));
    }
  }
  bool diverges = true;
  for (double pv : {3.0, 4.0}) {
    diverges = diverges && lower_bound_formula(1000000, PExponent(pv)) > lower_bound_formula(1000, PExponent(pv));
  }
  r.pass = ok && worst_formula <= 1e-14 && diverges;
  r.detail = "min numeric_lb - formula_lb = " + num(min_margin) + ", formula error " + num(worst_formula) +
             ", growth from k=1e3 to 1e6 " + (diverges ? "yes" : "no");
  return r;
}

CriterionResult criterion6() {
  CriterionResult r{6, "threshold search", true, "", 0};
  std::ostringstream detail;
  bool ok = true;
  for (double pv : {3.0, 4.0}) {
    const PExponent p(pv);
    const std::int64_t kk = threshold_k(p, 4.0);
    ok = ok && lower_bound_formula(kk, p) > 4.0 && lower_bound_formula(kk - 1, p) <= 4.0;
    for (std::int64_t j = kk - 5; j < kk + 5; ++j) ok = ok && ((lower_bound_formula(j, p) > 4.0) == (j >= kk));
    detail << "p=" << pv << ": K=" << kk << " ";
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

CriterionResult criterion7(std::uint64_t seed) {
  CriterionResult r{7, "complete positivity and contraction", true, "", 0};
  double min_eig = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (int k = 2; k <= 6; ++k) {
    for (double pv : {2.5, 3.0, 4.0}) {
      const CounterexampleMaps maps = build_counterexample_maps(k, PExponent(pv));
      min_eig = std::min(min_eig, choi_min_eigenvalue(maps.u));
      max_ratio = std::max(max_ratio, sampled_contraction_ratio(maps.u, PExponent(pv), 500, seed + k));
    }
  }
  r.pass = min_eig >= -1e-12 && max_ratio <= 1.0 + 1e-9;
  r.detail = "min Choi eigenvalue " + num(min_eig) + ", max sampled ratio " + num(max_ratio);
  return r;
}

YeadonSpec random_spec(Rng& rng, int n, int reps, int antis, double p) {
  YeadonSpec s;
  s.n = n;
  s.p = p;
  std::vector<double> raw;
  double total = 0.0;
  for (int i = 0; i < reps + antis; ++i) {
    raw.push_back(rng.uniform(0.2, 1.0));
    total += std::pow(raw.back(), p);
  }
  for (int i = 0; i < reps + antis; ++i) {
    const double w = raw[i] / std::pow(total, 1.0 / p);
    (i < reps ? s.rep_weights : s.antirep_weights).push_back(w);
  }
  return s;
}

CriterionResult criterion8(std::uint64_t seed) {
  CriterionResult r{8, "Yeadon isometries", true, "", 0};
  Rng rng(seed + 8);
  const PExponent p(3.0);
  double worst_iso = 0.0;
  const int shapes[4][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (const auto& sh : shapes) {
    const YeadonSpec spec = random_spec(rng, 2, sh[0], sh[1], p.value());
    const YeadonMap t = build_isometry(spec, p);
    for (int i = 0; i < 100; ++i) {
      const Mat a = rng.gaussian(2, 2);
      const double na = schatten_norm(a, p);
      worst_iso = std::max(worst_iso, std::abs(schatten_norm(t.apply(a), p) - na) / na);
    }
  }
  const YeadonSpec mixed = random_spec(rng, 2, 1, 1, p.value());
  const JordanSplit split = jordan_split(mixed, p);
  const ContractionReport r1 = tensor_contraction_report(split.t1, BlockKind::kRep, p, 3, 20, seed + 81);
  const ContractionReport r2 = tensor_contraction_report(split.t2, BlockKind::kAntirep, p, 3, 20, seed + 82);
  const YeadonSpec t_spec = random_spec(rng, 2, 1, 1, p.value());
  const YeadonSpec s_spec = random_spec(rng, 2, 1, 1, conjugate(p).value());
  const KrausMap u = rigid_compose(t_spec, s_spec, p);
  const RigidReport rr = rigid_bound_report(u, p, 3, 20, seed + 83);
  r.pass = worst_iso <= 1e-10 && r1.violations == 0 && r2.violations == 0 && rr.violations == 0;
  r.detail = "isometry error " + num(worst_iso) + "; split violations " + std::to_string(r1.violations) + "+" +
             std::to_string(r2.violations) + "/40; rigid violations " + std::to_string(rr.violations) +
             "/20 (max ratio " + num(rr.max_ratio) + ")";
  return r;
}

struct FuzzCase {
  VecElem y;
  PExponent p;
  Side side;
};

FuzzCase fuzz_case(Rng& rng, bool square = false) {
  static const double ps[] = {1.5, 2.5, 3.0, 4.0};
  const int k = rng.integer(1, 3);
  const int n = square ? k : rng.integer(1, 3);
  VecElem y = rng.vec_elem(k, n);
  // Occasionally rank-deficient coordinates.
  if (rng.integer(0, 4) == 0 && k > 1) {
    const Mat proj = rng.psd_of_rank(k, 1);
    for (Mat& c : y.coords) c = c * proj;
  }
  return {y, PExponent(ps[rng.integer(0, 3)]), rng.integer(0, 1) == 0 ? Side::kEllRow : Side::kRCol};
}

CriterionResult criterion9(std::uint64_t seed, int cases) {
  CriterionResult r{9, "property suites", true, "", 0};
  Rng rng(seed + 9);
  int v_pair = 0, v_sound = 0, v_sub = 0, v_hom = 0, v_p2 = 0, v_opp = 0, v_proj = 0, v_del = 0;
  for (int t = 0; t < cases; ++t) {
    {
      const FuzzCase f = fuzz_case(rng);
      const VecElem y2 = rng.vec_elem(f.y.k, f.y.n());
      const double lhs = std::abs(pairing(f.y, y2));
      const double rhs = alpha_upper(f.y, f.p, f.side).value * alpha_upper(y2, conjugate(f.p), f.side).value;
      if (lhs > rhs + 1e-9) ++v_pair;
    }
    {
      const FuzzCase f = fuzz_case(rng);
      const NormCertificate c = alpha_certify(f.y, f.p, f.side);
      if (!(c.lower >= 0.0 && c.lower <= c.upper * (1.0 + 1e-9))) ++v_sound;
    }
    {
      const FuzzCase f = fuzz_case(rng);
      const VecElem y2 = rng.vec_elem(f.y.k, f.y.n());
      const UpperBound u1 = alpha_upper(f.y, f.p, f.side);
      const UpperBound u2 = alpha_upper(y2, f.p, f.side);
      NormOptions comb;
      comb.hints = {u1.witness, u2.witness};
      comb.combine_hints = true;
      if (alpha_upper(f.y + y2, f.p, f.side, comb).value > u1.value + u2.value + 1e-9) ++v_sub;
      const Complex s(rng.uniform(0.1, 10.0) * std::cos(t), rng.uniform(0.1, 10.0) * std::sin(t));
      const NormCertificate c = alpha_certify(f.y, f.p, f.side);
      const NormCertificate cs = alpha_certify(s * f.y, f.p, f.side);
      const double m = std::abs(s);
      if (std::abs(cs.upper - m * c.upper) > 1e-10 * m * c.upper ||
          std::abs(cs.lower - m * c.lower) > 1e-10 * m * std::max(c.lower, 1e-300)) {
        ++v_hom;
      }
    }
    {
      const FuzzCase f = fuzz_case(rng);
      NormOptions two;
      two.two_sided_at_2 = true;
      const double a = alpha_upper(f.y, PExponent(2.0), f.side).value;
      const double b = alpha_upper(f.y, PExponent(2.0), f.side, two).value;
      if (std::abs(a - b) > 1e-6 * std::max(a, b)) ++v_p2;
    }
    {
      const FuzzCase f = fuzz_case(rng);
      const NormCertificate cr = alpha_certify(f.y, f.p, Side::kRCol);
      const NormCertificate cl = alpha_certify(opposite_transform(f.y), f.p, Side::kEllRow);
      if (std::max(cr.lower, cl.lower) > std::min(cr.upper, cl.upper) * (1.0 + 1e-9)) ++v_opp;
    }
    {
      const FuzzCase f = fuzz_case(rng, true);
      const VecElem py = project_diagonal(f.y);
      const double ul = alpha_upper(f.y, f.p, Side::kEllRow).value;
      const double ur = alpha_upper(f.y, f.p, Side::kRCol).value;
      const double ll = alpha_certify(py, f.p, Side::kEllRow).lower;
      const double lr = alpha_certify(py, f.p, Side::kRCol).lower;
      bool bad = ll > ul + 1e-9 || lr > ur + 1e-9;
      if (t % 5 == 0) {
        bad = bad || beta_certify(py, f.p).lower > beta_certify(f.y, f.p).upper + 1e-9;
      }
      if (bad) ++v_proj;
    }
    {
      const FuzzCase f = fuzz_case(rng);
      const UpperBound full = alpha_upper(f.y, f.p, f.side);
      VecElem cut = f.y;
      cut.coords[rng.integer(0, cut.n() - 1)].setZero();
      NormOptions hint;
      hint.hints = {full.witness};
      if (alpha_upper(cut, f.p, f.side, hint).value > full.value * (1.0 + 1e-12)) ++v_del;
    }
  }
  const int total = v_pair + v_sound + v_sub + v_hom + v_p2 + v_opp + v_proj + v_del;
  r.pass = total == 0;
  std::ostringstream d;
  d << cases << " cases each; violations: pairing " << v_pair << ", soundness " << v_sound << ", subadditivity "
    << v_sub << ", homogeneity " << v_hom << ", p=2 branches " << v_p2 << ", opposite " << v_opp
    << ", projection " << v_proj << ", deletion " << v_del;
  r.detail = d.str();
  return r;
}

CriterionResult criterion10(std::uint64_t seed, int samples) {
  CriterionResult r{10, "random factorization oracle", true, "", 0};
  Rng rng(seed + 10);
  const PExponent p(3.0);
  double worst_gap = 0.0;
  bool ok = true;
  for (int e = 0; e < 5; ++e) {
    const VecElem y = rng.vec_elem(2, 2);
    const double upper = alpha_upper(y, p, Side::kEllRow).value;
    const double best = random_factorization_search(y, p, samples, rng);
    ok = ok && upper <= best + 1e-9 && upper >= 0.98 * best;
    worst_gap = std::max(worst_gap, (best - upper) / best);
  }
  r.pass = ok;
  r.detail = "max relative gap to random search " + num(worst_gap) + " over 5 elements";
  return r;
}

template <typename F>
CriterionResult timed(F&& f, double budget_seconds) {
  const auto t0 = Clock::now();
  CriterionResult r = f();
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_seconds > 0.0 && r.seconds > budget_seconds) {
    r.pass = false;
    r.detail += "; exceeded time budget of " + num(budget_seconds) + " s";
  }
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  const auto s = opts.seed;
  record(timed([&] { return criterion1(s); }, 5.0));
  record(timed([&] { return criterion2(s); }, 60.0));
  record(timed([&] { return criterion3(); }, 10.0));
  record(timed([&] { return criterion4(); }, 0.0));
  record(timed([&] { return criterion5(s); }, 0.0));
  record(timed([&] { return criterion6(); }, 1.0));
  record(timed([&] { return criterion7(s); }, 0.0));
  record(timed([&] { return criterion8(s); }, 0.0));
  record(timed([&] { return criterion9(s, opts.fuzz_cases); }, 0.0));
  record(timed([&] { return criterion10(s, opts.brute_force_samples); }, 120.0));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace nclp
