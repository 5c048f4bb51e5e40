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
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "hbell/linalg.hpp"
#include "hbell/maps.hpp"

namespace hbell {

/// Threshold separating physical signaling from roundoff.
inline constexpr double kSignalingTol = 1e-6;
/// Threshold below which a map counts as linear during classification.
inline constexpr double kLinearityTol = 1e-9;

enum class Verdict { non_signaling, signaling };

struct SignalingReport {
  Verdict verdict = Verdict::non_signaling;
  std::optional<DensityOperator> witness;  // present iff signaling
  std::string witness_origin;              // e.g. "grid V=0.1 f=0.1 phase=0 theta=0.39"
  double deviation = 0.0;   // witness deviation, or the worst seen if none
  double tolerance = kSignalingTol;
  std::size_t samples_used = 0;
};

enum class MapClass { linear, nonlinear_nonsignaling, signaling };

struct MapClassification {
  bool linear = false;
  bool signaling = false;
  MapClass label = MapClass::linear;
  double linearity_deviation = 0.0;
  SignalingReport report;
};

/// "L", "NL-nonsignaling" or "S".
std::string to_string(MapClass c);
std::string to_string(Verdict v);

/// max |Tr_B[E_AB(rho)] - E_A(Tr_B rho)| where B is everything outside
/// `a_factors`. `map_ab` acts on the whole space of rho; without `local_a` the
/// A-component is the identity.
double reduced_deviation(const QuantumMap& map_ab, const DensityOperator& rho,
                         std::span<const std::size_t> a_factors);
double reduced_deviation(const QuantumMap& map_ab, const DensityOperator& rho,
                         std::span<const std::size_t> a_factors, const QuantumMap& local_a);
double reduced_deviation(const LocalProductMap& map, const DensityOperator& rho);

/// Looks for a state on which the map signals. When the space is the
/// interferometer's [2, 2, 3] with A = {u, d}, the interferometer output
/// family on a fixed parameter grid is tried first; then `samples` random
/// states (alternating Haar pure and Hilbert-Schmidt mixed), each drawn from
/// its own sub-seed of `seed`. Stops at the first state above `tol`.
SignalingReport search_witness(const LocalProductMap& map, std::size_t samples, double tol,
                               std::uint64_t seed);

/// `map` acts either on the B side (dim = B dimension, lifted with identity on
/// A) or on the whole space (with identity as the A-component).
SignalingReport search_witness(const QuantumMap& map, const SpaceStructure& space,
                               const BipartiteSplit& split, std::size_t samples, double tol,
                               std::uint64_t seed);

/// Linearity probe plus witness search. Throws FrameworkViolationError if the
/// map comes out both linear and signaling.
MapClassification classify(const QuantumMap& map, const SpaceStructure& space,
                           const BipartiteSplit& split, std::size_t samples, double tol,
                           std::uint64_t seed, double linearity_tol = kLinearityTol);
MapClassification classify(const LocalProductMap& map, std::size_t samples, double tol,
                           std::uint64_t seed, double linearity_tol = kLinearityTol);

}  // namespace hbell
