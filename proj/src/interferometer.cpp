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

#include "hbell/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "hbell/errors.hpp"

namespace hbell {

namespace {

constexpr double kProbSlack = 1e-12;
constexpr double kRotatorTol = 1e-10;
constexpr double kRegimeLimit = 0.3;
constexpr Complex kI{0.0, 1.0};

// Flat index of |u>|d>|e> on [2, 2, 3].
Eigen::Index flat(Eigen::Index u, Eigen::Index d, Eigen::Index e) { return (u * 2 + d) * 3 + e; }

double checked_probability(double p, const char* which) {
  if (p < -kProbSlack || p > 1.0 + kProbSlack || !std::isfinite(p)) {
    std::ostringstream os;
    os << "click probability " << which << " = " << p << " outside [0, 1]";
    throw NumericalIntegrityError(os.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

ClickProbabilities probabilities_from(const ComplexMatrix& pa, const ComplexMatrix& pb,
                                      const ComplexMatrix& rho) {
  return {checked_probability((pa * rho).trace().real(), "p_A"),
          checked_probability((pb * rho).trace().real(), "p_B")};
}

}  // namespace

const SpaceStructure& output_space() {
  static const SpaceStructure space{2, 2, 3};
  return space;
}

InterferometerParams InterferometerParams::at(double phase_delay, double theta) const {
  InterferometerParams p = *this;
  p.phase = phase_delay;
  p.rot_a = std::cos(theta);
  p.rot_b = std::sin(theta);
  return p;
}

void InterferometerParams::validate() const {
  const double s = std::norm(rot_a) + std::norm(rot_b);
  if (std::abs(s - 1.0) > kRotatorTol) {
    std::ostringstream os;
    os << "rotator coefficients must satisfy |a|^2 + |b|^2 = 1 (got " << s << ")";
    throw UsageError(os.str());
  }
  for (Complex z : {pump, eff1, eff2}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw UsageError("interferometer amplitudes must be finite");
    }
  }
  if (!std::isfinite(phase)) throw UsageError("phase delay must be finite");
}

std::vector<std::string> InterferometerParams::regime_warnings() const {
  std::vector<std::string> out;
  auto note = [&](const char* what, double v) {
    if (v > kRegimeLimit) {
      std::ostringstream os;
      os << what << " = " << v << " exceeds " << kRegimeLimit
         << "; higher-order down-conversion is not negligible";
      out.push_back(os.str());
    }
  };
  note("|f1|", std::abs(eff1));
  note("|f2|", std::abs(eff2));
  note("|V f1|", std::abs(pump * eff1));
  note("|V f2|", std::abs(pump * eff2));
  return out;
}

double normalization(const InterferometerParams& p) {
  return std::sqrt(1.0 + std::norm(p.pump) * (std::norm(p.eff1) + std::norm(p.eff2)));
}

StateVector build_output_state(const InterferometerParams& p) {
  p.validate();
  const double n = normalization(p);
  const Complex first = p.pump * p.eff1 * std::exp(kI * p.phase);
  ComplexVector amps = ComplexVector::Zero(12);
  amps(flat(0, 0, kEscVacuum)) = 1.0;
  amps(flat(1, 0, kEscPhoton)) = first * p.rot_a;
  amps(flat(1, 0, kEscOrthogonal)) = first * p.rot_b;
  amps(flat(0, 1, kEscPhoton)) = p.pump * p.eff2;
  amps /= n;
  return StateVector(output_space(), std::move(amps));
}

ComplexVector alpha_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0;  // |0>_u |1>_d
  v(2) = kI;   // |1>_u |0>_d
  return v / std::numbers::sqrt2;
}

ComplexVector beta_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(2) = 1.0;
  v(1) = kI;
  return v / std::numbers::sqrt2;
}

DetectorProjectors detector_projectors() {
  const ComplexMatrix id_e = ComplexMatrix::Identity(3, 3);
  return {tensor(projector_from_vector(alpha_vector()), id_e),
          tensor(projector_from_vector(beta_vector()), id_e)};
}

ClickProbabilities click_probabilities(const DensityOperator& rho) {
  if (!(rho.space() == output_space())) {
    throw UsageError("click probabilities need a state on " + output_space().to_string());
  }
  static const DetectorProjectors proj = detector_projectors();
  return probabilities_from(proj.p_a, proj.p_b, rho.matrix());
}

ClickProbabilities lab_click_probabilities(const DensityOperator& rho_ud) {
  if (rho_ud.dim() != 4) throw UsageError("laboratory state must live on u (x) d");
  static const ComplexMatrix pa = projector_from_vector(alpha_vector());
  static const ComplexMatrix pb = projector_from_vector(beta_vector());
  return probabilities_from(pa, pb, rho_ud.matrix());
}

ClickProbabilities closed_form_probabilities(const InterferometerParams& p) {
  p.validate();
  const double n = normalization(p);
  const double pref = std::norm(p.pump) / (2.0 * n * n);
  const double base = std::norm(p.eff1) + std::norm(p.eff2);
  const double interference =
      2.0 * (kI * std::conj(p.eff1) * p.eff2 * std::conj(p.rot_a) * std::exp(-kI * p.phase)).real();
  return {pref * (base + interference), pref * (base - interference)};
}

ClickProbabilities hm_probabilities(const InterferometerParams& p, const HMNonlinearMap& map) {
  if (map.dim() != 3) throw UsageError("nonlinear map on the escaping beam must have dim 3");
  const DensityOperator rho = DensityOperator::pure(build_output_state(p));
  return click_probabilities(apply_hm(map, rho, kFactorE));
}

double hm_signal_closed_form(const InterferometerParams& p) {
  p.validate();
  const double nstar_sq =
      1.0 + std::norm(p.pump) *
                (std::norm(p.eff2) + std::norm(p.eff1) * (std::norm(p.rot_a - p.rot_b) +
                                                          std::norm(p.rot_b)));
  const Complex term =
      kI * std::conj(p.eff1) * p.eff2 * std::conj(p.rot_a - p.rot_b) * std::exp(-kI * p.phase);
  return 2.0 * std::norm(p.pump) / nstar_sq * term.real();
}

DensityOperator reduced_lab_state(const StateVector& psi) {
  if (!(psi.space() == output_space())) {
    throw UsageError("reduced_lab_state needs a state on " + output_space().to_string());
  }
  return partial_trace(DensityOperator::pure(psi), {kFactorU, kFactorD});
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw UsageError("grid needs at least one point");
  std::vector<double> g(n);
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo + h * static_cast<double>(k);
  return g;
}

double theta_argmax(const ScanResult& result, std::size_t phase_index) {
  if (phase_index >= result.phase_steps) throw UsageError("phase index out of range");
  const auto first = result.rows.begin() + static_cast<std::ptrdiff_t>(phase_index * result.theta_steps);
  const auto last = first + static_cast<std::ptrdiff_t>(result.theta_steps);
  const auto best = std::max_element(first, last, [](const ScanRow& x, const ScanRow& y) {
    return std::abs(x.signal) < std::abs(y.signal);
  });
  return best->theta;
}

double angle_distance_mod_pi(double x, double y) {
  const double d = std::fmod(std::abs(x - y), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

ScanResult scan(const InterferometerParams& base, std::span<const double> phase_grid,
                std::span<const double> theta_grid, const QuantumMap& map) {
  if (phase_grid.empty() || theta_grid.empty()) throw UsageError("scan grids must be nonempty");
  const bool on_e = map.dim() == output_space().dim(kFactorE);
  if (!on_e && map.dim() != output_space().total()) {
    throw UsageError("scan map must act on e (dim 3) or the full output space (dim 12)");
  }

  ScanResult result;
  result.params = base;
  result.map_description = map.describe();
  result.phase_steps = phase_grid.size();
  result.theta_steps = theta_grid.size();
  result.rows.resize(phase_grid.size() * theta_grid.size());

  const std::size_t e_factor[] = {kFactorE};
  auto eval = [&](std::size_t idx) {
    const double phase = phase_grid[idx / theta_grid.size()];
    const double theta = theta_grid[idx % theta_grid.size()];
    const DensityOperator rho = DensityOperator::pure(build_output_state(base.at(phase, theta)));
    const DensityOperator out = on_e ? map.apply(rho, e_factor) : map.apply(rho);
    const ClickProbabilities p = click_probabilities(out);
    result.rows[idx] = {phase, theta, p.p_a, p.p_b, p.signal()};
  };

  const std::size_t total = result.rows.size();
  const std::size_t workers =
      total < 256 ? 1 : std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) eval(i);
    return result;
  }

  // Rows are preallocated, so each worker writes a disjoint strided slice.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += workers) eval(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

}  // namespace hbell
