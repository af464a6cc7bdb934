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

#include "nclp/random.hpp"

namespace nclp {

Mat Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal();
      const double im = normal();
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Mat Rng::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Mat Rng::psd_of_rank(Eigen::Index n, Eigen::Index rank) {
  const Mat g = gaussian(n, rank);
  return g * g.adjoint();
}

Mat Rng::contraction(Eigen::Index rows, Eigen::Index cols) {
  Mat g = gaussian(rows, cols);
  const double top = singular_values(g)[0];
  return top > 0.0 ? Mat(g / top * uniform(0.2, 1.0)) : g;
}

VecElem Rng::vec_elem(int k, int n) {
  std::vector<Mat> coords;
  for (int i = 0; i < n; ++i) coords.push_back(gaussian(k, k));
  return VecElem(k, std::move(coords));
}

}  // namespace nclp
