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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hbell {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kNorm = 1e-10;
inline constexpr double kHerm = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
}  // namespace tol

/// Ordered list of subsystem dimensions. The leftmost factor is the
/// slowest-varying index: |i>|j>|k> on [d0, d1, d2] sits at (i*d1 + j)*d2 + k.
class SpaceStructure {
 public:
  SpaceStructure() = default;
  explicit SpaceStructure(std::vector<std::size_t> factor_dims);
  SpaceStructure(std::initializer_list<std::size_t> factor_dims)
      : SpaceStructure(std::vector<std::size_t>(factor_dims)) {}

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t num_factors() const { return dims_.size(); }
  std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
  std::size_t total() const { return total_; }

  /// Product of the dimensions of the listed factors.
  std::size_t subspace_dim(std::span<const std::size_t> factors) const;
  /// Structure made of the listed factors, in original order.
  SpaceStructure sub_structure(std::span<const std::size_t> factors) const;
  /// Factors not listed, ascending.
  std::vector<std::size_t> complement(std::span<const std::size_t> factors) const;

  /// Multi-index of a flat basis index.
  std::vector<std::size_t> unflatten(std::size_t index) const;
  std::size_t flatten(std::span<const std::size_t> multi) const;

  /// Sorted, deduplicated copy of `factors`; throws UsageError when empty,
  /// out of range or repeated.
  std::vector<std::size_t> checked_subset(std::span<const std::size_t> factors) const;

  std::string to_string() const;

  friend bool operator==(const SpaceStructure& a, const SpaceStructure& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Normalized pure state on a SpaceStructure.
class StateVector {
 public:
  /// Throws UsageError when the size mismatches or |v| deviates from 1 by
  /// more than tol::kNorm.
  StateVector(SpaceStructure space, ComplexVector amplitudes);

  const SpaceStructure& space() const { return space_; }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  SpaceStructure space_;
  ComplexVector amps_;
};

struct DensityValidation {
  double hermiticity_error = 0.0;  // max |M - M^dagger| entry
  double min_eigenvalue = 0.0;     // of (M + M^dagger)/2
  double trace_error = 0.0;        // |Tr M - 1|
  bool hermitian = true;
  bool positive = true;
  bool unit_trace = true;

  bool valid() const { return hermitian && positive && unit_trace; }
  std::string describe() const;
};

/// Checks hermiticity, positivity and unit trace, each against `tolerance`.
/// Positivity uses the spectrum of the Hermitian part. Throws UsageError on a
/// non-square input.
DensityValidation validate_density(const ComplexMatrix& m, double tolerance = tol::kHerm);

/// Positive, unit-trace Hermitian operator on a SpaceStructure. Every
/// constructed instance has passed validate_density.
class DensityOperator {
 public:
  DensityOperator(SpaceStructure space, ComplexMatrix matrix);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(SpaceStructure space);

  const SpaceStructure& space() const { return space_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return space_.total(); }

 private:
  SpaceStructure space_;
  ComplexMatrix matrix_;
};

/// Kronecker product, leftmost operand slowest.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the kept factors (ascending order) of an operator on
/// `space`. Throws UsageError when `keep` is empty or invalid.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SpaceStructure& space,
                            std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// op acting on `factors` (jointly, in ascending order), identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix& op, const SpaceStructure& space,
                             std::span<const std::size_t> factors);

/// Operator on `space` equal to a on `a_factors` tensored with b on the rest,
/// for any interleaving of the two factor groups.
ComplexMatrix tensor_on_split(const SpaceStructure& space, std::span<const std::size_t> a_factors,
                              const ComplexMatrix& a, const ComplexMatrix& b);

/// |v><v|. Throws UsageError unless |v| = 1 within tol::kNorm.
ComplexMatrix projector_from_vector(const ComplexVector& v);
ComplexMatrix projector_from_vector(const StateVector& v);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace hbell
