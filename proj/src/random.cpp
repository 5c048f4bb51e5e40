// Copyright 2026 The hbell Authors
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

#include "hbell/random.hpp"

#include <cmath>
#include <vector>

#include "hbell/maps.hpp"

namespace hbell {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

DensityOperator random_density(const SpaceStructure& space, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(space.total());
  const ComplexMatrix g = gaussian_matrix(n, n, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  // Symmetrize away the last-bit asymmetry of the product.
  m = (m + m.adjoint()).eval() * 0.5;
  return DensityOperator(space, std::move(m));
}

StateVector random_pure_state(const SpaceStructure& space, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(space.total());
  ComplexVector v = gaussian_matrix(n, 1, rng).col(0);
  v.normalize();
  return StateVector(space, std::move(v));
}

KrausChannel random_kraus_channel(std::size_t dim, Rng& rng, std::size_t num_ops) {
  if (num_ops == 0) {
    std::uniform_int_distribution<std::size_t> pick(1, dim * dim);
    num_ops = pick(rng);
  }
  const auto d = static_cast<Eigen::Index>(dim);
  const auto k = static_cast<Eigen::Index>(num_ops);
  const ComplexMatrix iso = haar_isometry(d * k, d, rng);
  std::vector<ComplexMatrix> ops;
  ops.reserve(num_ops);
  for (Eigen::Index j = 0; j < k; ++j) ops.emplace_back(iso.middleRows(j * d, d));
  return KrausChannel(std::move(ops));
}

}  // namespace hbell
