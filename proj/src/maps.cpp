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

#include "hbell/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hbell/errors.hpp"

namespace hbell {

namespace {

std::vector<std::size_t> all_factors(const SpaceStructure& space) {
  std::vector<std::size_t> f(space.num_factors());
  std::iota(f.begin(), f.end(), std::size_t{0});
  return f;
}

void check_target_dim(std::size_t map_dim, const SpaceStructure& space,
                      std::span<const std::size_t> factors) {
  const std::size_t sub = space.subspace_dim(space.checked_subset(factors));
  if (sub != map_dim) {
    throw UsageError("map dimension " + std::to_string(map_dim) +
                     " does not match target subsystem dimension " + std::to_string(sub));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw InvalidChannelError("Kraus channel needs at least one operator");
  const Eigen::Index d = ops_.front().rows();
  if (d == 0) throw InvalidChannelError("Kraus operators must be nonempty");
  for (const auto& e : ops_) {
    if (e.rows() != d || e.cols() != d) {
      throw InvalidChannelError("Kraus operators must be square with a common dimension");
    }
  }
  dim_ = static_cast<std::size_t>(d);
  const double dev = completeness_deviation();
  if (!(dev <= kKrausTol)) {
    std::ostringstream os;
    os << "Kraus completeness violated by " << dev;
    throw InvalidChannelError(os.str());
  }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return KrausChannel({ComplexMatrix::Identity(d, d)});
}

KrausChannel KrausChannel::dephasing(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(k, k) = 1.0;
    ops.push_back(std::move(p));
  }
  return KrausChannel(std::move(ops));
}

double KrausChannel::completeness_deviation() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : ops_) sum += e.adjoint() * e;
  return max_abs_diff(sum, ComplexMatrix::Identity(d, d));
}

HMNonlinearMap::HMNonlinearMap(ComplexMatrix t) : t_(std::move(t)) {
  if (t_.rows() == 0 || t_.rows() != t_.cols()) {
    throw InvalidMapError("nonlinear map operator must be square and nonempty");
  }
  const double det = std::abs(t_.determinant());
  if (!(det > kSingularTol)) {
    std::ostringstream os;
    os << "nonlinear map operator is singular (|det T| = " << det << ")";
    throw InvalidMapError(os.str());
  }
}

HMNonlinearMap HMNonlinearMap::shear_preset() {
  ComplexMatrix t = ComplexMatrix::Identity(3, 3);
  t(1, 2) = -1.0;
  return HMNonlinearMap(std::move(t));
}

QuantumMap::QuantumMap(GeneralMap m) : v_(std::move(m)) {
  const auto& g = std::get<GeneralMap>(v_);
  if (g.dim == 0 || !g.action) throw UsageError("general map needs a dimension and an action");
}

std::size_t QuantumMap::dim() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IdentityMap> || std::is_same_v<M, GeneralMap>) {
          return m.dim;
        } else {
          return m.dim();
        }
      },
      v_);
}

std::string QuantumMap::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::identity:
      os << "identity(dim=" << dim() << ")";
      break;
    case Kind::kraus:
      os << "kraus(dim=" << dim() << ", ops=" << std::get<KrausChannel>(v_).operators().size()
         << ")";
      break;
    case Kind::hm:
      os << "hm(dim=" << dim() << ")";
      break;
    case Kind::general:
      os << "general(" << std::get<GeneralMap>(v_).name << ", dim=" << dim() << ")";
      break;
  }
  return os.str();
}

DensityOperator QuantumMap::apply(const DensityOperator& rho) const {
  if (rho.dim() != dim()) {
    throw UsageError("map dimension " + std::to_string(dim()) + " does not match state dimension " +
                     std::to_string(rho.dim()));
  }
  const auto f = all_factors(rho.space());
  return apply(rho, f);
}

DensityOperator QuantumMap::apply(const DensityOperator& rho,
                                  std::span<const std::size_t> factors) const {
  check_target_dim(dim(), rho.space(), factors);
  switch (kind()) {
    case Kind::identity:
      return rho;
    case Kind::kraus:
      return apply_kraus(std::get<KrausChannel>(v_), rho, factors);
    case Kind::hm:
      return apply_hm(std::get<HMNonlinearMap>(v_), rho, factors);
    case Kind::general: {
      const auto& g = std::get<GeneralMap>(v_);
      const std::vector<std::size_t> sorted = rho.space().checked_subset(factors);
      try {
        DensityOperator out = g.action(rho, sorted);
        if (!(out.space() == rho.space())) {
          throw InvalidMapError("general map '" + g.name + "' changed the state space");
        }
        return out;
      } catch (const UsageError& e) {
        throw InvalidMapError("general map '" + g.name + "' produced an invalid state: " +
                              e.what());
      }
    }
  }
  throw UsageError("unknown map kind");
}

DensityOperator apply_kraus(const KrausChannel& ch, const DensityOperator& rho) {
  if (rho.dim() != ch.dim()) {
    throw UsageError("Kraus channel dimension " + std::to_string(ch.dim()) +
                     " does not match state dimension " + std::to_string(rho.dim()));
  }
  const auto n = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& e : ch.operators()) out.noalias() += e * rho.matrix() * e.adjoint();
  return DensityOperator(rho.space(), std::move(out));
}

DensityOperator apply_kraus(const KrausChannel& ch, const DensityOperator& rho,
                            std::span<const std::size_t> factors) {
  check_target_dim(ch.dim(), rho.space(), factors);
  const auto n = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& e : ch.operators()) {
    const ComplexMatrix big = embed_operator(e, rho.space(), factors);
    out.noalias() += big * rho.matrix() * big.adjoint();
  }
  return DensityOperator(rho.space(), std::move(out));
}

DensityOperator apply_hm(const HMNonlinearMap& map, const DensityOperator& rho,
                         std::size_t target_factor) {
  const std::size_t f[] = {target_factor};
  return apply_hm(map, rho, f);
}

DensityOperator apply_hm(const HMNonlinearMap& map, const DensityOperator& rho,
                         std::span<const std::size_t> factors) {
  check_target_dim(map.dim(), rho.space(), factors);
  const ComplexMatrix big = embed_operator(map.op(), rho.space(), factors);
  ComplexMatrix out = big * rho.matrix() * big.adjoint();
  const double denom = out.trace().real();
  if (!(denom >= kDenomTol)) {
    std::ostringstream os;
    os << "nonlinear map annihilates the state (Tr = " << denom << ")";
    throw DegenerateStateError(os.str());
  }
  out /= denom;
  return DensityOperator(rho.space(), hermitian_part(out));
}

QuantumMap lift_local(const QuantumMap& map, const SpaceStructure& space,
                      std::size_t target_factor) {
  if (target_factor >= space.num_factors()) {
    throw UsageError("target factor " + std::to_string(target_factor) + " out of range for " +
                     space.to_string());
  }
  if (map.dim() != space.dim(target_factor)) {
    throw UsageError("map dimension " + std::to_string(map.dim()) +
                     " does not match factor dimension " +
                     std::to_string(space.dim(target_factor)));
  }
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t k = 0; k < space.num_factors(); ++k) {
    if (k < target_factor) before *= space.dim(k);
    if (k > target_factor) after *= space.dim(k);
  }
  const auto id_before = ComplexMatrix::Identity(static_cast<Eigen::Index>(before),
                                                 static_cast<Eigen::Index>(before));
  const auto id_after = ComplexMatrix::Identity(static_cast<Eigen::Index>(after),
                                                static_cast<Eigen::Index>(after));
  auto widen = [&](const ComplexMatrix& op) {
    return tensor(tensor(id_before, op), id_after);
  };

  switch (map.kind()) {
    case QuantumMap::Kind::identity:
      return QuantumMap::identity(space.total());
    case QuantumMap::Kind::kraus: {
      std::vector<ComplexMatrix> ops;
      for (const auto& e : std::get<KrausChannel>(map.variant()).operators()) {
        ops.push_back(widen(e));
      }
      return KrausChannel(std::move(ops));
    }
    case QuantumMap::Kind::hm:
      return HMNonlinearMap(widen(std::get<HMNonlinearMap>(map.variant()).op()));
    case QuantumMap::Kind::general: {
      const auto& inner = std::get<GeneralMap>(map.variant());
      GeneralMap lifted;
      lifted.dim = space.total();
      lifted.name = "lift(" + inner.name + ")";
      lifted.action = [inner_map = map, space, target_factor](
                          const DensityOperator& rho,
                          std::span<const std::size_t> factors) -> DensityOperator {
        if (!(rho.space() == space) || factors.size() != space.num_factors()) {
          throw UsageError("lifted map only acts on the whole of " + space.to_string());
        }
        const std::size_t f[] = {target_factor};
        return inner_map.apply(rho, f);
      };
      return QuantumMap(std::move(lifted));
    }
  }
  throw UsageError("unknown map kind");
}

LinearityVerdict linearity_probe(const QuantumMap& map, const SpaceStructure& space,
                                 std::size_t samples, double tol, Rng& rng) {
  if (samples == 0) throw UsageError("linearity_probe needs at least one sample");
  if (map.dim() != space.total()) {
    throw UsageError("map dimension does not match probe space " + space.to_string());
  }
  std::uniform_real_distribution<double> weight(0.05, 0.95);
  LinearityVerdict verdict;
  for (std::size_t s = 0; s < samples; ++s) {
    const DensityOperator rho = random_density(space, rng);
    const DensityOperator sigma = random_density(space, rng);
    const double lambda = weight(rng);
    const DensityOperator mix(space, lambda * rho.matrix() + (1.0 - lambda) * sigma.matrix());
    const ComplexMatrix lhs = map.apply(mix).matrix();
    const ComplexMatrix rhs =
        lambda * map.apply(rho).matrix() + (1.0 - lambda) * map.apply(sigma).matrix();
    verdict.max_deviation = std::max(verdict.max_deviation, max_abs_diff(lhs, rhs));
  }
  verdict.samples = samples;
  verdict.linear = verdict.max_deviation < tol;
  return verdict;
}

LinearityVerdict linearity_probe(const QuantumMap& map, std::size_t dim, std::size_t samples,
                                 double tol, Rng& rng) {
  return linearity_probe(map, SpaceStructure{dim}, samples, tol, rng);
}

void BipartiteSplit::check(const SpaceStructure& space) const {
  if (a_factors.empty() || b_factors.empty()) {
    throw UsageError("both sides of a bipartite split must be nonempty");
  }
  std::vector<std::size_t> all(a_factors);
  all.insert(all.end(), b_factors.begin(), b_factors.end());
  const auto sorted = space.checked_subset(all);
  if (sorted.size() != space.num_factors()) {
    throw UsageError("bipartite split does not cover every factor of " + space.to_string());
  }
}

LocalProductMap::LocalProductMap(SpaceStructure space, BipartiteSplit split,
                                 QuantumMap component_a, QuantumMap component_b)
    : space_(std::move(space)),
      split_(std::move(split)),
      a_(std::move(component_a)),
      b_(std::move(component_b)) {
  split_.check(space_);
  std::sort(split_.a_factors.begin(), split_.a_factors.end());
  std::sort(split_.b_factors.begin(), split_.b_factors.end());
  check_target_dim(a_.dim(), space_, split_.a_factors);
  check_target_dim(b_.dim(), space_, split_.b_factors);
}

DensityOperator LocalProductMap::apply(const DensityOperator& rho) const {
  if (!(rho.space() == space_)) {
    throw UsageError("state space " + rho.space().to_string() + " does not match " +
                     space_.to_string());
  }
  return a_.apply(b_.apply(rho, split_.b_factors), split_.a_factors);
}

double LocalProductMap::locality_deviation(const DensityOperator& rho_a,
                                           const DensityOperator& sigma_b) const {
  const DensityOperator joint(
      space_, tensor_on_split(space_, split_.a_factors, rho_a.matrix(), sigma_b.matrix()));
  const ComplexMatrix lhs = apply(joint).matrix();
  const ComplexMatrix rhs = tensor_on_split(space_, split_.a_factors, a_.apply(rho_a).matrix(),
                                            b_.apply(sigma_b).matrix());
  return max_abs_diff(lhs, rhs);
}

}  // namespace hbell
