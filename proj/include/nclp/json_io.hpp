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

#include <json.hpp>

#include "nclp/counterexample.hpp"
#include "nclp/cpmaps.hpp"
#include "nclp/vecnorm.hpp"
#include "nclp/yeadon.hpp"

// JSON encodings. Matrices are {"rows","cols","re","im"} in row-major order.
// Every decoder throws InvalidInput on malformed data.
namespace nclp::io {

using nlohmann::json;

json to_json(const Mat& m);
Mat mat_from_json(const json& j);

json to_json(const VecElem& y);
VecElem vec_elem_from_json(const json& j);

json to_json(const FactorWitness& w);
json to_json(const NormCertificate& c);

json to_json(const KrausMap& m);
KrausMap kraus_map_from_json(const json& j);

json to_json(const YeadonSpec& s);
YeadonSpec yeadon_spec_from_json(const json& j);

json to_json(const CounterexampleReport& r);
json to_json(const ContractionReport& r);
json to_json(const RigidReport& r);

}  // namespace nclp::io
