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

#include "hbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hbell/errors.hpp"

namespace hbell {

SpaceStructure::SpaceStructure(std::vector<std::size_t> factor_dims)
    : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw UsageError("space structure needs at least one factor");
  for (std::size_t d : dims_) {
    if (d == 0) throw UsageError("factor dimensions must be positive");
    total_ *= d;
  }
}

std::size_t SpaceStructure::subspace_dim(std::span<const std::size_t> factors) const {
  std::size_t n = 1;
  for (std::size_t f : factors) n *= dims_.at(f);
  return n;
}

SpaceStructure SpaceStructure::sub_structure(std::span<const std::size_t> factors) const {
  std::vector<std::size_t> d;
  for (std::size_t f : checked_subset(factors)) d.push_back(dims_[f]);
  return SpaceStructure(std::move(d));
}

std::vector<std::size_t> SpaceStructure::complement(std::span<const std::size_t> factors) const {
  std::vector<std::size_t> rest;
  for (std::size_t f = 0; f < dims_.size(); ++f) {
    if (std::find(factors.begin(), factors.end(), f) == factors.end()) rest.push_back(f);
  }
  return rest;
}

std::vector<std::size_t> SpaceStructure::unflatten(std::size_t index) const {
  std::vector<std::size_t> multi(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    multi[k] = index % dims_[k];
    index /= dims_[k];
  }
  return multi;
}

std::size_t SpaceStructure::flatten(std::span<const std::size_t> multi) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) index = index * dims_[k] + multi[k];
  return index;
}

std::vector<std::size_t> SpaceStructure::checked_subset(
    std::span<const std::size_t> factors) const {
  if (factors.empty()) throw UsageError("factor subset must be nonempty");
  std::vector<std::size_t> sorted(factors.begin(), factors.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw UsageError("factor subset has repeated indices");
  }
  if (sorted.back() >= dims_.size()) {
    throw UsageError("factor index " + std::to_string(sorted.back()) + " out of range for " +
                     to_string());
  }
  return sorted;
}

std::string SpaceStructure::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
  os << ']';
  return os.str();
}

StateVector::StateVector(SpaceStructure space, ComplexVector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != space_.total()) {
    throw UsageError("state vector size does not match space " + space_.to_string());
  }
  if (std::abs(amps_.norm() - 1.0) > tol::kNorm) {
    throw UsageError("state vector is not normalized");
  }
}

std::string DensityValidation::describe() const {
  if (valid()) return "valid";
  std::ostringstream os;
  const char* sep = "";
  if (!hermitian) {
    os << sep << "hermiticity off by " << hermiticity_error;
    sep = "; ";
  }
  if (!positive) {
    os << sep << "min eigenvalue " << min_eigenvalue;
    sep = "; ";
  }
  if (!unit_trace) os << sep << "trace off by " << trace_error;
  return os.str();
}

DensityValidation validate_density(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw UsageError("validate_density needs a nonempty square matrix");
  }
  DensityValidation v;
  const ComplexMatrix adj = m.adjoint();
  v.hermiticity_error = max_abs_diff(m, adj);
  const ComplexMatrix herm = (m + adj) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = eig.eigenvalues().minCoeff();
  v.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  v.hermitian = v.hermiticity_error <= tolerance;
  v.positive = v.min_eigenvalue >= -tolerance;
  v.unit_trace = v.trace_error <= tolerance;
  return v;
}

DensityOperator::DensityOperator(SpaceStructure space, ComplexMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(space_.total());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw UsageError("density matrix shape does not match space " + space_.to_string());
  }
  const DensityValidation v = validate_density(matrix_, tol::kHerm);
  if (!v.valid()) throw UsageError("not a density operator: " + v.describe());
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(psi.space(), projector_from_vector(psi));
}

DensityOperator DensityOperator::maximally_mixed(SpaceStructure space) {
  const auto n = static_cast<Eigen::Index>(space.total());
  ComplexMatrix m = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  return DensityOperator(std::move(space), std::move(m));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

// Flat index of the sub-multi-index picked out by `factors` (ascending).
std::size_t sub_index(const SpaceStructure& space, const std::vector<std::size_t>& multi,
                      const std::vector<std::size_t>& factors) {
  std::size_t idx = 0;
  for (std::size_t f : factors) idx = idx * space.dim(f) + multi[f];
  return idx;
}

struct SplitIndices {
  std::vector<std::size_t> inside;   // per flat index, index within `factors`
  std::vector<std::size_t> outside;  // per flat index, index within the complement
};

SplitIndices split_indices(const SpaceStructure& space, const std::vector<std::size_t>& factors) {
  const std::vector<std::size_t> rest = space.complement(factors);
  SplitIndices s;
  s.inside.resize(space.total());
  s.outside.resize(space.total());
  for (std::size_t i = 0; i < space.total(); ++i) {
    const auto multi = space.unflatten(i);
    s.inside[i] = sub_index(space, multi, factors);
    s.outside[i] = sub_index(space, multi, rest);
  }
  return s;
}

void check_square_on(const ComplexMatrix& m, const SpaceStructure& space) {
  const auto n = static_cast<Eigen::Index>(space.total());
  if (m.rows() != n || m.cols() != n) {
    throw UsageError("operator shape does not match space " + space.to_string());
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const SpaceStructure& space,
                            std::span<const std::size_t> keep) {
  check_square_on(m, space);
  const std::vector<std::size_t> kept = space.checked_subset(keep);
  const SplitIndices s = split_indices(space, kept);
  const auto n = static_cast<Eigen::Index>(space.subspace_dim(kept));
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const std::size_t total = space.total();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (s.outside[i] != s.outside[j]) continue;
      out(static_cast<Eigen::Index>(s.inside[i]), static_cast<Eigen::Index>(s.inside[j])) +=
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.space(), keep);
  return DensityOperator(rho.space().sub_structure(keep), std::move(reduced));
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const SpaceStructure& space,
                             std::span<const std::size_t> factors) {
  const std::vector<std::size_t> target = space.checked_subset(factors);
  const auto sub = static_cast<Eigen::Index>(space.subspace_dim(target));
  if (op.rows() != sub || op.cols() != sub) {
    throw UsageError("operator dimension " + std::to_string(op.rows()) +
                     " does not match target subsystem dimension " + std::to_string(sub));
  }
  const SplitIndices s = split_indices(space, target);
  const auto n = static_cast<Eigen::Index>(space.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      if (s.outside[ui] != s.outside[uj]) continue;
      out(i, j) = op(static_cast<Eigen::Index>(s.inside[ui]), static_cast<Eigen::Index>(s.inside[uj]));
    }
  }
  return out;
}

ComplexMatrix tensor_on_split(const SpaceStructure& space, std::span<const std::size_t> a_factors,
                              const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::vector<std::size_t> as = space.checked_subset(a_factors);
  const auto da = static_cast<Eigen::Index>(space.subspace_dim(as));
  const auto db = static_cast<Eigen::Index>(space.total()) / da;
  if (a.rows() != da || a.cols() != da || b.rows() != db || b.cols() != db) {
    throw UsageError("tensor_on_split operand shapes do not match the split of " +
                     space.to_string());
  }
  const SplitIndices s = split_indices(space, as);
  const auto n = static_cast<Eigen::Index>(space.total());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      out(i, j) = a(static_cast<Eigen::Index>(s.inside[ui]), static_cast<Eigen::Index>(s.inside[uj])) *
                  b(static_cast<Eigen::Index>(s.outside[ui]), static_cast<Eigen::Index>(s.outside[uj]));
    }
  }
  return out;
}

ComplexMatrix projector_from_vector(const ComplexVector& v) {
  if (v.size() == 0 || std::abs(v.norm() - 1.0) > tol::kNorm) {
    throw UsageError("projector_from_vector needs a normalized vector");
  }
  return v * v.adjoint();
}

ComplexMatrix projector_from_vector(const StateVector& v) {
  return projector_from_vector(v.amplitudes());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("max_abs_diff shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace hbell
