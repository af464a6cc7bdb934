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

#include <stdexcept>
#include <string>

namespace nclp {

/// Malformed arguments: wrong shapes, non-finite entries, exponents out of range.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A hypothesis the caller promised does not hold for the given data.
class HypothesisViolated : public std::runtime_error {
 public:
  explicit HypothesisViolated(const std::string& what) : std::runtime_error(what) {}
};

/// A reconstruction failed beyond its tolerance.
class NumericalDegeneracy : public std::runtime_error {
 public:
  explicit NumericalDegeneracy(const std::string& what) : std::runtime_error(what) {}
};

/// Block data for an isometry failed validation.
class InvalidSpec : public std::invalid_argument {
 public:
  explicit InvalidSpec(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace nclp
