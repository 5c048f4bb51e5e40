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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hbell/linalg.hpp"
#include "hbell/random.hpp"

namespace hbell {

inline constexpr double kKrausTol = 1e-10;     // max entry of sum E^dagger E - 1
inline constexpr double kSingularTol = 1e-12;  // minimum |det T|
inline constexpr double kDenomTol = 1e-12;     // minimum Tr[T rho T^dagger]

/// Linear channel rho -> sum_j E_j rho E_j^dagger with sum_j E_j^dagger E_j = 1.
class KrausChannel {
 public:
  /// Throws InvalidChannelError when the list is empty, the operators are not
  /// square of a common size, or completeness fails beyond kKrausTol.
  explicit KrausChannel(std::vector<ComplexMatrix> operators);

  static KrausChannel identity(std::size_t dim);
  /// Projectors onto the computational basis.
  static KrausChannel dephasing(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  double completeness_deviation() const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> ops_;
};

/// Final-state-style nonlinear map rho -> T rho T^dagger / Tr[T rho T^dagger]
/// for a fixed nonsingular T.
class HMNonlinearMap {
 public:
  /// Throws InvalidMapError unless T is square with |det T| > kSingularTol.
  explicit HMNonlinearMap(ComplexMatrix t);

  /// The shear on span{|0>, |1>, |-1>} used for the escaping beam:
  /// T|0> = |0>, T|1> = |1>, T|-1> = |-1> - |1>.
  static HMNonlinearMap shear_preset();

  std::size_t dim() const { return static_cast<std::size_t>(t_.rows()); }
  const ComplexMatrix& op() const { return t_; }

 private:
  ComplexMatrix t_;
};

struct IdentityMap {
  std::size_t dim;
};

/// Trusted state-to-state map. `action` receives the full state and the
/// (ascending) factors the map acts on; it must return a state on the same
/// space. Its output is validated on every application.
struct GeneralMap {
  std::size_t dim;
  std::string name;
  std::function<DensityOperator(const DensityOperator&, std::span<const std::size_t>)> action;
};

class QuantumMap {
 public:
  enum class Kind { identity, kraus, hm, general };
  using Variant = std::variant<IdentityMap, KrausChannel, HMNonlinearMap, GeneralMap>;

  QuantumMap(IdentityMap m) : v_(m) {}
  QuantumMap(KrausChannel m) : v_(std::move(m)) {}
  QuantumMap(HMNonlinearMap m) : v_(std::move(m)) {}
  QuantumMap(GeneralMap m);

  static QuantumMap identity(std::size_t dim) { return QuantumMap(IdentityMap{dim}); }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  const Variant& variant() const { return v_; }
  std::size_t dim() const;
  std::string describe() const;

  /// Apply to a state whose total dimension equals dim().
  DensityOperator apply(const DensityOperator& rho) const;
  /// Apply to the joint subsystem formed by `factors` of rho.
  DensityOperator apply(const DensityOperator& rho, std::span<const std::size_t> factors) const;

 private:
  Variant v_;
};

DensityOperator apply_kraus(const KrausChannel& ch, const DensityOperator& rho);
DensityOperator apply_kraus(const KrausChannel& ch, const DensityOperator& rho,
                            std::span<const std::size_t> factors);

/// (1 (x) T) rho (1 (x) T)^dagger renormalized, T on `target_factor`. Throws
/// UsageError on a dimension mismatch and DegenerateStateError when the
/// unnormalized trace is below kDenomTol.
DensityOperator apply_hm(const HMNonlinearMap& map, const DensityOperator& rho,
                         std::size_t target_factor);
DensityOperator apply_hm(const HMNonlinearMap& map, const DensityOperator& rho,
                         std::span<const std::size_t> factors);

/// 1_rest (x) map on `space`, acting on `target_factor`. Kraus operators and T
/// are tensored with identities in factor order; general maps are bound to the
/// target and then only accept states on `space`.
QuantumMap lift_local(const QuantumMap& map, const SpaceStructure& space,
                      std::size_t target_factor);

struct LinearityVerdict {
  bool linear = true;
  double max_deviation = 0.0;
  std::size_t samples = 0;
};

/// Worst ||E(l rho + (1-l) sigma) - l E(rho) - (1-l) E(sigma)||_max over
/// random Hilbert-Schmidt pairs and l in (0, 1). Linear iff below tol.
LinearityVerdict linearity_probe(const QuantumMap& map, const SpaceStructure& space,
                                 std::size_t samples, double tol, Rng& rng);
LinearityVerdict linearity_probe(const QuantumMap& map, std::size_t dim, std::size_t samples,
                                 double tol, Rng& rng);

/// Partition of a space's factors into an A side and a B side.
struct BipartiteSplit {
  std::vector<std::size_t> a_factors;
  std::vector<std::size_t> b_factors;

  /// Throws UsageError unless the two sides are nonempty, disjoint and cover
  /// every factor of `space`.
  void check(const SpaceStructure& space) const;
};

/// E_A (x) E_B acting on the two sides of a split.
class LocalProductMap {
 public:
  LocalProductMap(SpaceStructure space, BipartiteSplit split, QuantumMap component_a,
                  QuantumMap component_b);

  const SpaceStructure& space() const { return space_; }
  const BipartiteSplit& split() const { return split_; }
  const QuantumMap& component_a() const { return a_; }
  const QuantumMap& component_b() const { return b_; }

  DensityOperator apply(const DensityOperator& rho) const;

  /// max |E_AB(rho_a (x) sigma_b) - E_A(rho_a) (x) E_B(sigma_b)|, with the
  /// tensor product laid out on the split.
  double locality_deviation(const DensityOperator& rho_a, const DensityOperator& sigma_b) const;

 private:
  SpaceStructure space_;
  BipartiteSplit split_;
  QuantumMap a_;
  QuantumMap b_;
};

}  // namespace hbell
