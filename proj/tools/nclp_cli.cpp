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

// Command-line runner for norm certificates, the counterexample pipeline,
// isometry reports and the acceptance suite.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nclp/acceptance.hpp"
#include "nclp/counterexample.hpp"
#include "nclp/errors.hpp"
#include "nclp/json_io.hpp"
#include "nclp/random.hpp"
#include "nclp/yeadon.hpp"

namespace {

using nclp::io::json;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInvalid = 2;

struct Config {
  double p = 3.0;
  int k = 2;
  int n = 3;
  int kmin = 2;
  int kmax = 6;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iters = 5000;
  std::string in;
  std::string out;
  std::string format = "json";
  std::string side = "ell";
  int samples = 20;
  int fuzz = 500;
};

// Fails when the input path is unreadable; used before any computation starts.
json read_json(const std::string& path) {
  if (path.empty()) throw nclp::InvalidInput("--in is required");
  std::ifstream f(path);
  if (!f) throw nclp::InvalidInput("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw nclp::InvalidInput(path + ": " + e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw nclp::InvalidInput("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

nclp::NormOptions norm_options(const Config& c) {
  nclp::NormOptions o;
  o.max_iters = c.max_iters;
  o.seed = c.seed;
  return o;
}

int run_norm(const Config& c) {
  const nclp::PExponent p(c.p);
  const nclp::VecElem y = nclp::io::vec_elem_from_json(read_json(c.in));
  Output out(c.out);
  nclp::NormCertificate cert;
  if (c.side == "ell") {
    cert = nclp::alpha_certify(y, p, nclp::Side::kEllRow, norm_options(c));
  } else if (c.side == "r") {
    cert = nclp::alpha_certify(y, p, nclp::Side::kRCol, norm_options(c));
  } else if (c.side == "sum") {
    cert = nclp::beta_certify(y, p, norm_options(c));
  } else {
    throw nclp::InvalidInput("--side must be ell, r or sum");
  }
  json j = nclp::io::to_json(cert);
  j["p"] = c.p;
  j["side"] = c.side;
  out.stream() << j.dump(2) << '\n';
  if (!(cert.lower <= cert.upper * (1.0 + c.tol))) {
    std::cerr << "verification failed: lower bound exceeds upper bound\n";
    return kExitVerification;
  }
  return kExitOk;
}

int run_diag(const Config& c) {
  const nclp::PExponent p(c.p);
  if (c.k < 1) throw nclp::InvalidInput("--k must be positive");
  std::vector<nclp::Complex> lam(c.k, 1.0);
  if (!c.in.empty()) {
    const json j = read_json(c.in);
    lam.clear();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.value("im", std::vector<double>(re.size(), 0.0));
    if (re.empty() || im.size() != re.size()) throw nclp::InvalidInput("diag input needs equal-length re/im arrays");
    for (std::size_t i = 0; i < re.size(); ++i) lam.emplace_back(re[i], im[i]);
  }
  Output out(c.out);
  const double exact = nclp::diagonal_closed_form(lam, p);
  const nclp::VecElem y = nclp::diagonal_element(lam);
  const auto ell = nclp::alpha_certify(y, p, nclp::Side::kEllRow, norm_options(c));
  const auto col = nclp::alpha_certify(y, p, nclp::Side::kRCol, norm_options(c));
  auto brackets = [&](const nclp::NormCertificate& cert) {
    return cert.lower <= exact * (1.0 + c.tol) && cert.upper >= exact * (1.0 - c.tol) &&
           cert.upper - cert.lower <= c.tol * exact;
  };
  const bool pass = brackets(ell) && brackets(col);
  json j{{"k", static_cast<int>(lam.size())},
         {"p", c.p},
         {"closed_form", exact},
         {"ell", {{"upper", ell.upper}, {"lower", ell.lower}}},
         {"r", {{"upper", col.upper}, {"lower", col.lower}}},
         {"pass", pass}};
  out.stream() << j.dump(2) << '\n';
  if (!pass) {
    std::cerr << "verification failed: certificate does not match the diagonal closed form\n";
    return kExitVerification;
  }
  return kExitOk;
}

int run_counterexample(const Config& c) {
  const nclp::PExponent p(c.p);
  Output out(c.out);
  nclp::PipelineOptions po;
  po.norm = norm_options(c);
  po.seed = c.seed;
  const nclp::CounterexampleReport rep = nclp::verify_pipeline(c.k, p, po);
  out.stream() << nclp::io::to_json(rep).dump(2) << '\n';
  if (!rep.all_checks()) {
    for (const auto& d : rep.diagnostics) std::cerr << "verification failed: " << d << '\n';
    return kExitVerification;
  }
  return kExitOk;
}

int run_sweep(const Config& c) {
  const nclp::PExponent p(c.p);
  if (c.format != "csv" && c.format != "json") throw nclp::InvalidInput("--format must be csv or json");
  Output out(c.out);
  nclp::PipelineOptions po;
  po.norm = norm_options(c);
  po.seed = c.seed;
  const auto rows = nclp::sweep(p, c.kmin, c.kmax, po);
  const std::int64_t threshold = nclp::threshold_k(p, 4.0);
  if (c.format == "csv") {
    out.stream() << nclp::sweep_csv(rows);
    std::cerr << "threshold_k(p=" << c.p << ", 4) = " << threshold << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"k", r.k},
                         {"p", r.p},
                         {"formula_lb", r.formula_lb},
                         {"numeric_lb", r.numeric_lb},
                         {"upper_w", r.upper_w},
                         {"threshold_pass", r.threshold_pass}});
    }
    out.stream() << json{{"rows", arr}, {"threshold_k", threshold}}.dump(2) << '\n';
  }
  for (const auto& r : rows) {
    if (r.numeric_lb < r.formula_lb - 1e-12) {
      std::cerr << "verification failed: numeric lower bound below the formula at k = " << r.k << '\n';
      return kExitVerification;
    }
  }
  return kExitOk;
}

int run_yeadon(const Config& c) {
  nclp::YeadonSpec spec = nclp::io::yeadon_spec_from_json(read_json(c.in));
  const nclp::PExponent p(spec.p);
  Output out(c.out);
  const nclp::YeadonMap t = nclp::build_isometry(spec, p);
  const nclp::JordanSplit split = nclp::jordan_split(spec, p);
  nclp::Rng rng(c.seed);
  double iso_err = 0.0;
  double split_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const nclp::Mat a = rng.gaussian(spec.n, spec.n);
    const double na = nclp::schatten_norm(a, p);
    iso_err = std::max(iso_err, std::abs(nclp::schatten_norm(t.apply(a), p) - na) / na);
    split_err = std::max(split_err, (split.t1.apply(a) + split.t2.apply(a) - t.apply(a)).cwiseAbs().maxCoeff());
  }
  const auto opts = norm_options(c);
  const auto r1 = nclp::tensor_contraction_report(split.t1, nclp::BlockKind::kRep, p, c.n, c.samples, c.seed + 1,
                                                  {}, opts, c.tol);
  const auto r2 = nclp::tensor_contraction_report(split.t2, nclp::BlockKind::kAntirep, p, c.n, c.samples,
                                                  c.seed + 2, {}, opts, c.tol);
  const bool pass = iso_err <= 1e-10 && split_err == 0.0 && r1.violations == 0 && r2.violations == 0;
  json j{{"spec", nclp::io::to_json(spec)},
         {"isometry_error", iso_err},
         {"split_error", split_err},
         {"t1", nclp::io::to_json(r1)},
         {"t2", nclp::io::to_json(r2)},
         {"pass", pass}};
  out.stream() << j.dump(2) << '\n';
  if (!pass) {
    std::cerr << "verification failed: isometry or split contraction check\n";
    return kExitVerification;
  }
  return kExitOk;
}

int run_selftest(const Config& c) {
  Output out(c.out);
  nclp::AcceptanceOptions ao;
  ao.seed = c.seed;
  ao.fuzz_cases = c.fuzz;
  bool all = true;
  nclp::run_acceptance(ao, [&](const nclp::CriterionResult& r) {
    out.stream() << nclp::format_result(r) << std::endl;
    all = all && r.pass;
  });
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified factorization norms on Schatten classes"};
  app.require_subcommand(1);
  Config c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--tol", c.tol, "Verification tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-iters", c.max_iters, "Newton step budget per solve");
    sub->add_option("--out", c.out, "Output file (default stdout)");
  };
  auto* norm = app.add_subcommand("norm", "Certify the norm of a VecElem file");
  norm->add_option("--in", c.in, "VecElem JSON")->required();
  norm->add_option("--p", c.p, "Exponent");
  norm->add_option("--side", c.side, "ell, r or sum");
  add_common(norm);
  auto* diag = app.add_subcommand("diag", "Certify a diagonal element against its closed form");
  diag->add_option("--k", c.k, "Size (coefficients all 1 unless --in is given)");
  diag->add_option("--p", c.p, "Exponent");
  diag->add_option("--in", c.in, "JSON {\"re\":[...],\"im\":[...]} of coefficients");
  add_common(diag);
  auto* ce = app.add_subcommand("counterexample", "Run the counterexample pipeline at one (k, p)");
  ce->add_option("--k", c.k, "Size");
  ce->add_option("--p", c.p, "Exponent");
  add_common(ce);
  auto* sw = app.add_subcommand("sweep", "Lower bounds over a range of k");
  sw->add_option("--p", c.p, "Exponent");
  sw->add_option("--kmin", c.kmin, "First k");
  sw->add_option("--kmax", c.kmax, "Last k");
  sw->add_option("--format", c.format, "csv or json");
  add_common(sw);
  auto* ye = app.add_subcommand("yeadon", "Isometry, split and contraction reports for a spec file");
  ye->add_option("--in", c.in, "YeadonSpec JSON")->required();
  ye->add_option("--n", c.n, "Number of coordinates in sampled elements");
  ye->add_option("--samples", c.samples, "Random samples per report");
  add_common(ye);
  auto* st = app.add_subcommand("selftest", "Run the acceptance suite");
  st->add_option("--fuzz", c.fuzz, "Fuzz cases per property suite");
  add_common(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  try {
    if (*norm) return run_norm(c);
    if (*diag) return run_diag(c);
    if (*ce) return run_counterexample(c);
    if (*sw) return run_sweep(c);
    if (*ye) return run_yeadon(c);
    if (*st) return run_selftest(c);
  } catch (const nclp::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nclp::InvalidSpec& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitInvalid;
}
