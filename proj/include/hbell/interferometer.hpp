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
#include <span>
#include <string>
#include <vector>

#include "hbell/linalg.hpp"
#include "hbell/maps.hpp"

namespace hbell {

// Basis of the escaping signal beam: vacuum, photon in the down-converted
// polarization, photon in the orthogonal polarization.
inline constexpr Eigen::Index kEscVacuum = 0;
inline constexpr Eigen::Index kEscPhoton = 1;
inline constexpr Eigen::Index kEscOrthogonal = 2;

// Factor order of the output space u (x) d (x) e.
inline constexpr std::size_t kFactorU = 0;
inline constexpr std::size_t kFactorD = 1;
inline constexpr std::size_t kFactorE = 2;

/// The [2, 2, 3] output space u (x) d (x) e.
const SpaceStructure& output_space();

/// Source and rotator settings of the two-crystal interferometer.
struct InterferometerParams {
  Complex pump{0.1, 0.0};   // V
  Complex eff1{0.1, 0.0};   // f1, first crystal
  Complex eff2{0.1, 0.0};   // f2, second crystal
  double phase = 0.0;       // idler phase delay, radians
  Complex rot_a{1.0, 0.0};  // rotator amplitude into the original polarization
  Complex rot_b{0.0, 0.0};  // ... and into the orthogonal one

  /// Copy with the given phase and real rotator (a, b) = (cos theta, sin theta).
  InterferometerParams at(double phase_delay, double theta) const;

  /// Throws UsageError unless |a|^2 + |b|^2 = 1 within 1e-10.
  void validate() const;
  /// Non-blocking notes when |f_i| or |V f_i| exceed 0.3, where dropping
  /// higher-order down-conversion stops being a good approximation.
  std::vector<std::string> regime_warnings() const;
};

/// N = sqrt(1 + |V|^2 (|f1|^2 + |f2|^2)).
double normalization(const InterferometerParams& p);

StateVector build_output_state(const InterferometerParams& p);

/// Detector vectors on u (x) d: alpha = (|01> + i|10>)/sqrt2, beta = (|10> + i|01>)/sqrt2.
ComplexVector alpha_vector();
ComplexVector beta_vector();

struct DetectorProjectors {
  ComplexMatrix p_a;  // P_alpha (x) 1_e
  ComplexMatrix p_b;  // P_beta (x) 1_e
};

DetectorProjectors detector_projectors();

struct ClickProbabilities {
  double p_a = 0.0;
  double p_b = 0.0;
  double signal() const { return p_a - p_b; }
};

/// Tr(P_A rho), Tr(P_B rho) on the full output space. Values within 1e-12 of
/// [0, 1] are clamped; anything further out raises NumericalIntegrityError.
ClickProbabilities click_probabilities(const DensityOperator& rho);

/// Same probabilities from the reduced laboratory state on u (x) d.
ClickProbabilities lab_click_probabilities(const DensityOperator& rho_ud);

/// Closed-form click probabilities of the unevolved output state.
ClickProbabilities closed_form_probabilities(const InterferometerParams& p);

/// Click probabilities after the nonlinear map acts on the escaping beam.
ClickProbabilities hm_probabilities(const InterferometerParams& p, const HMNonlinearMap& map);

/// Closed-form p*_A - p*_B for the shear preset only.
double hm_signal_closed_form(const InterferometerParams& p);

/// Tr_e |psi><psi|.
DensityOperator reduced_lab_state(const StateVector& psi);

struct ScanRow {
  double phase;
  double theta;
  double p_a;
  double p_b;
  double signal;
};

struct ScanResult {
  InterferometerParams params;
  std::string map_description;
  std::size_t phase_steps = 0;
  std::size_t theta_steps = 0;
  std::vector<ScanRow> rows;  // phase-major, then theta
};

/// Evaluates every (phase, theta) point with `map` applied to the escaping
/// beam before detection. `map` acts on e (dim 3) or on the whole output
/// space (dim 12).
ScanResult scan(const InterferometerParams& base, std::span<const double> phase_grid,
                std::span<const double> theta_grid, const QuantumMap& map);

/// theta of the row with the largest |signal| in the phase_index-th phase
/// block of a scan (first one on ties).
double theta_argmax(const ScanResult& result, std::size_t phase_index);

/// Distance between two angles on the circle of circumference pi.
double angle_distance_mod_pi(double x, double y);

/// n points lo, lo + h, ..., hi - h with h = (hi - lo) / n.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace hbell
