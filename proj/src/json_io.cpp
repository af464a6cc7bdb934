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

#include "nclp/json_io.hpp"

#include "nclp/errors.hpp"

namespace nclp::io {
namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const Mat& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Mat mat_from_json(const json& j) {
  return guarded("matrix", [&] {
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows < 1 || cols < 1) throw InvalidInput("matrix: rows and cols must be positive");
    const auto& re = j.at("re");
    const json im = j.contains("im") ? j.at("im") : json::array();
    const auto count = static_cast<std::size_t>(rows * cols);
    if (!re.is_array() || re.size() != count) throw InvalidInput("matrix: 're' length does not match rows*cols");
    if (!im.is_array() || (im.size() != count && !(im.empty() && !j.contains("im")))) {
      throw InvalidInput("matrix: 'im' length does not match rows*cols");
    }
    Mat m(rows, cols);
    for (long long i = 0; i < rows; ++i) {
      for (long long c = 0; c < cols; ++c) {
        const auto idx = static_cast<std::size_t>(i * cols + c);
        const double imv = im.empty() ? 0.0 : im[idx].get<double>();
        m(i, c) = Complex(re[idx].get<double>(), imv);
      }
    }
    require_finite(m, "matrix");
    return m;
  });
}

json to_json(const VecElem& y) {
  json coords = json::array();
  for (const Mat& c : y.coords) coords.push_back(to_json(c));
  return json{{"k", y.k}, {"n", y.n()}, {"coords", coords}};
}

VecElem vec_elem_from_json(const json& j) {
  return guarded("VecElem", [&] {
    const int k = j.at("k").get<int>();
    const int n = j.at("n").get<int>();
    const auto& coords = j.at("coords");
    if (!coords.is_array() || static_cast<int>(coords.size()) != n) {
      throw InvalidInput("VecElem: 'coords' length does not match n");
    }
    std::vector<Mat> cs;
    for (const auto& c : coords) cs.push_back(mat_from_json(c));
    return VecElem(k, std::move(cs));
  });
}

json to_json(const FactorWitness& w) { return json{{"left", to_json(w.left)}, {"right", to_json(w.right)}}; }

json to_json(const NormCertificate& c) {
  json out{{"upper", c.upper},
           {"lower", c.lower},
           {"converged", c.converged},
           {"iterations", c.iterations},
           {"factor_witness", to_json(c.factor_witness)},
           {"dual_witness", to_json(c.dual_witness)}};
  return out;
}

json to_json(const KrausMap& m) {
  json terms = json::array();
  for (const auto& t : m.terms) terms.push_back(json{{"a", to_json(t.a)}, {"b", to_json(t.b)}});
  return json{{"k", m.k}, {"terms", terms}};
}

KrausMap kraus_map_from_json(const json& j) {
  return guarded("KrausMap", [&] {
    const int k = j.at("k").get<int>();
    std::vector<KrausTerm> terms;
    for (const auto& t : j.at("terms")) terms.push_back({mat_from_json(t.at("a")), mat_from_json(t.at("b"))});
    return KrausMap(k, std::move(terms));
  });
}

json to_json(const YeadonSpec& s) {
  json out{{"n", s.n}, {"rep_weights", s.rep_weights}, {"antirep_weights", s.antirep_weights}, {"p", s.p}};
  if (s.w) out["W"] = to_json(*s.w);
  return out;
}

YeadonSpec yeadon_spec_from_json(const json& j) {
  return guarded("YeadonSpec", [&] {
    YeadonSpec s;
    s.n = j.at("n").get<int>();
    s.rep_weights = j.value("rep_weights", std::vector<double>{});
    s.antirep_weights = j.value("antirep_weights", std::vector<double>{});
    s.p = j.at("p").get<double>();
    if (j.contains("W") && !j.at("W").is_null()) s.w = mat_from_json(j.at("W"));
    return s;
  });
}

json to_json(const CounterexampleReport& r) {
  return json{{"k", r.k},
              {"p", r.p},
              {"upper_w", r.upper_w},
              {"lower_w", r.lower_w},
              {"formula_lb", r.formula_lb},
              {"numeric_lb", r.numeric_lb},
              {"choi_min_eigenvalue", r.choi_min_eigenvalue},
              {"contraction_ratio", r.contraction_ratio},
              {"closed_form_error", r.closed_form_error},
              {"closed_form_match", r.closed_form_match},
              {"upper_w_ok", r.upper_w_ok},
              {"dominance", r.dominance},
              {"completely_positive", r.completely_positive},
              {"contraction", r.contraction},
              {"threshold_pass", r.threshold_pass},
              {"rigid_violation", r.rigid_violation},
              {"diagnostics", r.diagnostics}};
}

json to_json(const ContractionReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back(json{{"input_upper", s.input_upper}, {"image_lower", s.image_lower}, {"ok", s.ok}});
  }
  return json{{"side", r.side}, {"violations", r.violations}, {"max_excess", r.max_excess}, {"samples", samples}};
}

json to_json(const RigidReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back(
        json{{"input_upper", s.input_upper}, {"image_beta_lower", s.image_beta_lower}, {"ok", s.ok}});
  }
  return json{{"violations", r.violations}, {"max_ratio", r.max_ratio}, {"samples", samples}};
}

}  // namespace nclp::io
