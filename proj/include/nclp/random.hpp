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
#include <random>

#include "nclp/schatten.hpp"
#include "nclp/vecnorm.hpp"

namespace nclp {

/// Seeded source of random test data. All randomness in the library flows
/// through this type.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  /// Entries with independent standard normal real and imaginary parts.
  Mat gaussian(Eigen::Index rows, Eigen::Index cols);
  /// Haar-distributed unitary.
  Mat unitary(Eigen::Index n);
  /// PSD matrix of the given rank.
  Mat psd_of_rank(Eigen::Index n, Eigen::Index rank);
  /// Matrix with operator norm at most 1.
  Mat contraction(Eigen::Index rows, Eigen::Index cols);
  VecElem vec_elem(int k, int n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace nclp
