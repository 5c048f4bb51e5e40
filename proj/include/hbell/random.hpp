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

#pragma once

#include <cstdint>
#include <random>

#include "hbell/linalg.hpp"

namespace hbell {

class KrausChannel;

using Rng = std::mt19937_64;

/// Independent sub-seed for sample `index` of a run seeded with `master`
/// (splitmix64 finalizer), so samples can be evaluated in any order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Matrix of i.i.d. standard complex Gaussians.
ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-random isometry (rows >= cols) from the QR of a Gaussian matrix,
/// with the phases of R's diagonal folded back into Q.
ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Hilbert-Schmidt ensemble: G G^dagger / Tr(G G^dagger).
DensityOperator random_density(const SpaceStructure& space, Rng& rng);

/// Haar-random pure state.
StateVector random_pure_state(const SpaceStructure& space, Rng& rng);

/// Channel with `num_ops` Kraus operators read off a Haar isometry
/// C^dim -> C^(dim*num_ops). With num_ops == 0 the count is drawn from
/// {1, ..., dim^2}.
KrausChannel random_kraus_channel(std::size_t dim, Rng& rng, std::size_t num_ops = 0);

}  // namespace hbell
