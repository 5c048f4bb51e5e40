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

#include "hbell/signaling.hpp"

#include <algorithm>
#include <functional>
#include <numbers>
#include <sstream>

#include "hbell/errors.hpp"
#include "hbell/interferometer.hpp"

namespace hbell {

namespace {

// A bipartite evolution normalized to: the joint map on the whole space plus
// its declared A-side component.
struct Bipartite {
  SpaceStructure space;
  BipartiteSplit split;
  QuantumMap joint;
  QuantumMap local_a;
};

Bipartite from_product(const LocalProductMap& m) {
  GeneralMap joint;
  joint.dim = m.space().total();
  joint.name = "product[" + m.component_a().describe() + " x " + m.component_b().describe() + "]";
  joint.action = [m](const DensityOperator& rho, std::span<const std::size_t>) {
    return m.apply(rho);
  };
  return {m.space(), m.split(), QuantumMap(std::move(joint)), m.component_a()};
}

Bipartite from_map(const QuantumMap& map, const SpaceStructure& space,
                   const BipartiteSplit& split) {
  split.check(space);
  const std::size_t dim_a = space.subspace_dim(split.a_factors);
  const std::size_t dim_b = space.subspace_dim(split.b_factors);
  if (map.dim() == space.total()) {
    return {space, split, map, QuantumMap::identity(dim_a)};
  }
  if (map.dim() == dim_b) {
    return from_product(LocalProductMap(space, split, QuantumMap::identity(dim_a), map));
  }
  throw UsageError("map dimension " + std::to_string(map.dim()) +
                   " matches neither the B side nor the whole of " + space.to_string());
}

bool is_interferometer_split(const SpaceStructure& space, const BipartiteSplit& split) {
  if (!(space == output_space())) return false;
  std::vector<std::size_t> a = split.a_factors;
  std::sort(a.begin(), a.end());
  return a == std::vector<std::size_t>{kFactorU, kFactorD};
}

struct Candidate {
  DensityOperator state;
  std::string origin;
};

// Output-state family: V, f1 = f2 in {0.1, 0.05}, phase in steps of pi/4,
// theta in steps of pi/8 over [0, pi).
std::vector<Candidate> interferometer_grid() {
  std::vector<Candidate> out;
  for (double v : {0.1, 0.05}) {
    for (double f : {0.1, 0.05}) {
      for (int k = 0; k < 8; ++k) {
        for (int j = 0; j < 8; ++j) {
          const double phase = k * std::numbers::pi / 4.0;
          const double theta = j * std::numbers::pi / 8.0;
          InterferometerParams p;
          p.pump = v;
          p.eff1 = f;
          p.eff2 = f;
          p = p.at(phase, theta);
          std::ostringstream os;
          os << "grid V=" << v << " f=" << f << " phase=" << phase << " theta=" << theta;
          out.push_back({DensityOperator::pure(build_output_state(p)), os.str()});
        }
      }
    }
  }
  return out;
}

double deviation_of(const Bipartite& b, const DensityOperator& rho) {
  return reduced_deviation(b.joint, rho, b.split.a_factors, b.local_a);
}

SignalingReport search(const Bipartite& b, std::size_t samples, double tol, std::uint64_t seed) {
  if (samples == 0) throw UsageError("witness search needs at least one sample");
  SignalingReport report;
  report.tolerance = tol;

  auto consider = [&](const DensityOperator& rho, const std::string& origin) {
    ++report.samples_used;
    const double dev = deviation_of(b, rho);
    if (dev > tol) {
      report.verdict = Verdict::signaling;
      report.witness = rho;
      report.witness_origin = origin;
      report.deviation = dev;
      return true;
    }
    report.deviation = std::max(report.deviation, dev);
    return false;
  };

  if (is_interferometer_split(b.space, b.split)) {
    for (const auto& c : interferometer_grid()) {
      if (consider(c.state, c.origin)) return report;
    }
  }
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const bool pure = i % 2 == 0;
    const DensityOperator rho = pure ? DensityOperator::pure(random_pure_state(b.space, rng))
                                     : random_density(b.space, rng);
    std::ostringstream os;
    os << (pure ? "random pure #" : "random mixed #") << i;
    if (consider(rho, os.str())) return report;
  }
  return report;
}

MapClassification classify_bipartite(const Bipartite& b, std::size_t samples, double tol,
                                     std::uint64_t seed, double linearity_tol) {
  MapClassification c;
  // Linearity probing and witness search draw from separate streams.
  Rng rng(derive_seed(seed, ~std::uint64_t{0}));
  const LinearityVerdict lin = linearity_probe(b.joint, b.space, samples, linearity_tol, rng);
  c.linear = lin.linear;
  c.linearity_deviation = lin.max_deviation;
  c.report = search(b, samples, tol, seed);
  c.signaling = c.report.verdict == Verdict::signaling;
  if (c.linear && c.signaling) {
    std::ostringstream os;
    os << "map " << b.joint.describe() << " passed the linearity probe (deviation "
       << c.linearity_deviation << ") yet signals (deviation " << c.report.deviation << ", "
       << c.report.witness_origin << ")";
    throw FrameworkViolationError(os.str());
  }
  c.label = c.linear ? MapClass::linear
                     : (c.signaling ? MapClass::signaling : MapClass::nonlinear_nonsignaling);
  return c;
}

}  // namespace

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::linear:
      return "L";
    case MapClass::nonlinear_nonsignaling:
      return "NL-nonsignaling";
    case MapClass::signaling:
      return "S";
  }
  return "?";
}

std::string to_string(Verdict v) {
  return v == Verdict::signaling ? "signaling" : "non_signaling";
}

double reduced_deviation(const QuantumMap& map_ab, const DensityOperator& rho,
                         std::span<const std::size_t> a_factors) {
  const std::size_t dim_a = rho.space().subspace_dim(rho.space().checked_subset(a_factors));
  return reduced_deviation(map_ab, rho, a_factors, QuantumMap::identity(dim_a));
}

double reduced_deviation(const QuantumMap& map_ab, const DensityOperator& rho,
                         std::span<const std::size_t> a_factors, const QuantumMap& local_a) {
  const DensityOperator evolved = map_ab.apply(rho);
  const ComplexMatrix lhs = partial_trace(evolved.matrix(), rho.space(), a_factors);
  const DensityOperator reduced = partial_trace(rho, a_factors);
  if (local_a.dim() != reduced.dim()) {
    throw UsageError("A-component dimension does not match the A side");
  }
  return max_abs_diff(lhs, local_a.apply(reduced).matrix());
}

double reduced_deviation(const LocalProductMap& map, const DensityOperator& rho) {
  return deviation_of(from_product(map), rho);
}

SignalingReport search_witness(const LocalProductMap& map, std::size_t samples, double tol,
                               std::uint64_t seed) {
  return search(from_product(map), samples, tol, seed);
}

SignalingReport search_witness(const QuantumMap& map, const SpaceStructure& space,
                               const BipartiteSplit& split, std::size_t samples, double tol,
                               std::uint64_t seed) {
  return search(from_map(map, space, split), samples, tol, seed);
}

MapClassification classify(const QuantumMap& map, const SpaceStructure& space,
                           const BipartiteSplit& split, std::size_t samples, double tol,
                           std::uint64_t seed, double linearity_tol) {
  return classify_bipartite(from_map(map, space, split), samples, tol, seed, linearity_tol);
}

MapClassification classify(const LocalProductMap& map, std::size_t samples, double tol,
                           std::uint64_t seed, double linearity_tol) {
  return classify_bipartite(from_product(map), samples, tol, seed, linearity_tol);
}

}  // namespace hbell
