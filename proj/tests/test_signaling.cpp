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

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "hbell/errors.hpp"
#include "hbell/interferometer.hpp"
#include "hbell/random.hpp"
#include "hbell/signaling.hpp"
#include "test_support.hpp"

using namespace hbell;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
const std::size_t kLab[] = {kFactorU, kFactorD};
const BipartiteSplit kSplit{{kFactorU, kFactorD}, {kFactorE}};

// Both sides of the signaling condition at one interferometer point, with the
// identity as the lab-side component, computed from the oracles alone.
double hm_deviation_oracle(const ComplexMatrix& t, const InterferometerParams& p) {
  const ComplexMatrix rho = testing::outer(
      testing::output_state_oracle(p.pump, p.eff1, p.eff2, p.phase, p.rot_a, p.rot_b));
  const ComplexMatrix lhs = testing::trace_out_e_oracle(testing::hm_on_e_oracle(t, rho));
  const ComplexMatrix rhs = testing::trace_out_e_oracle(rho);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("frozen signaling deviations from the oracle", "[signaling][oracle]") {
  // Values computed by hm_deviation_oracle and frozen here.
  const InterferometerParams ref;
  const HMNonlinearMap shear = HMNonlinearMap::shear_preset();
  SECTION("shear preset, theta = pi/2") {
    const InterferometerParams p = ref.at(0.0, kPi / 2.0);
    const double oracle = hm_deviation_oracle(shear.op(), p);
    CHECK_THAT(oracle, WithinRel(9.997000899730086e-05, 1e-9));
    const QuantumMap lifted = lift_local(shear, output_space(), kFactorE);
    const double dev =
        reduced_deviation(lifted, DensityOperator::pure(build_output_state(p)), kLab);
    CHECK_THAT(dev, WithinAbs(oracle, 1e-15));
    CHECK(dev > 1e-4 * 0.99);
  }
  SECTION("shear preset at a = 1, b = 0 leaves the state fixed") {
    CHECK(hm_deviation_oracle(shear.op(), ref) < 1e-15);
  }
  SECTION("literal array at a = 1, b = 0") {
    const HMNonlinearMap lit = testing::literal_array_map();
    const double oracle = hm_deviation_oracle(lit.op(), ref);
    CHECK_THAT(oracle, WithinRel(1.9988005597615377e-04, 1e-9));
    const double dev = reduced_deviation(lift_local(lit, output_space(), kFactorE),
                                         DensityOperator::pure(build_output_state(ref)), kLab);
    CHECK_THAT(dev, WithinAbs(oracle, 1e-15));
    CHECK(dev > 1e-4);
  }
}

TEST_CASE("reduced_deviation", "[signaling]") {
  Rng rng(2024);
  SECTION("identity map gives exactly zero") {
    const DensityOperator rho = random_density(output_space(), rng);
    CHECK(reduced_deviation(QuantumMap::identity(12), rho, kLab) == 0.0);
  }
  SECTION("Kraus channels on e never move the lab state") {
    for (int trial = 0; trial < 200; ++trial) {
      const QuantumMap lifted = lift_local(random_kraus_channel(3, rng), output_space(), kFactorE);
      const InterferometerParams p = InterferometerParams{}.at(trial * 0.1, trial * 0.05);
      CHECK(reduced_deviation(lifted, DensityOperator::pure(build_output_state(p)), kLab) < 1e-10);
      CHECK(reduced_deviation(lifted, random_density(output_space(), rng), kLab) < 1e-10);
    }
  }
  SECTION("no-signaling over [2,2,3] and [2,2] splits") {
    for (int trial = 0; trial < 1000; ++trial) {
      const QuantumMap e_map = lift_local(random_kraus_channel(3, rng), output_space(), kFactorE);
      CHECK(reduced_deviation(e_map, random_density(output_space(), rng), kLab) < 1e-9);
      const SpaceStructure qq{2, 2};
      const std::size_t a[] = {0};
      const QuantumMap b_map = lift_local(random_kraus_channel(2, rng), qq, 1);
      const DensityOperator rho = trial % 2 == 0 ? random_density(qq, rng)
                                                 : DensityOperator::pure(random_pure_state(qq, rng));
      CHECK(reduced_deviation(b_map, rho, a) < 1e-9);
    }
  }
  SECTION("decohered product inputs are blind to the nonlinear map") {
    const LocalProductMap m(output_space(), kSplit, QuantumMap::identity(4),
                            HMNonlinearMap::shear_preset());
    for (int trial = 0; trial < 200; ++trial) {
      const DensityOperator ra = random_density(SpaceStructure{2, 2}, rng);
      const DensityOperator sb = random_density(SpaceStructure{3}, rng);
      const std::size_t a[] = {0, 1};
      const DensityOperator prod(output_space(),
                                 tensor_on_split(output_space(), a, ra.matrix(), sb.matrix()));
      CHECK(reduced_deviation(m, prod) < 1e-10);
    }
  }
  SECTION("LocalProductMap uses its declared A component") {
    const KrausChannel ka = random_kraus_channel(4, rng);
    const LocalProductMap m(output_space(), kSplit, ka, random_kraus_channel(3, rng));
    for (int trial = 0; trial < 50; ++trial) {
      CHECK(reduced_deviation(m, random_density(output_space(), rng)) < 1e-10);
    }
  }
  SECTION("dimension mismatch") {
    const DensityOperator rho = random_density(output_space(), rng);
    CHECK_THROWS_AS(reduced_deviation(QuantumMap::identity(3), rho, kLab), UsageError);
    CHECK_THROWS_AS(reduced_deviation(QuantumMap::identity(12), rho, kLab, QuantumMap::identity(3)),
                    UsageError);
  }
}

TEST_CASE("search_witness", "[signaling]") {
  SECTION("identity map") {
    const SignalingReport r = search_witness(QuantumMap::identity(3), output_space(), kSplit, 50,
                                             kSignalingTol, 7);
    CHECK(r.verdict == Verdict::non_signaling);
    CHECK(r.deviation == 0.0);
    CHECK_FALSE(r.witness.has_value());
    CHECK(r.samples_used == 256 + 50);
  }
  SECTION("random Kraus channels never signal") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const SignalingReport r = search_witness(random_kraus_channel(3, rng), output_space(), kSplit,
                                               50, kSignalingTol, trial);
      CHECK(r.verdict == Verdict::non_signaling);
      CHECK(r.deviation < 1e-10);
    }
  }
  SECTION("shear preset signals on the interferometer grid") {
    const SignalingReport r = search_witness(HMNonlinearMap::shear_preset(), output_space(), kSplit,
                                             50, kSignalingTol, 7);
    REQUIRE(r.verdict == Verdict::signaling);
    REQUIRE(r.witness.has_value());
    CHECK(r.deviation > kSignalingTol);
    CHECK(r.witness_origin.rfind("grid V=0.1 f=0.1", 0) == 0);
    // Grid order: theta = 0 is a fixed point, so the first witness is theta = pi/8.
    CHECK(r.samples_used == 2);
    const InterferometerParams p = InterferometerParams{}.at(0.0, kPi / 8.0);
    CHECK_THAT(r.deviation,
               WithinAbs(hm_deviation_oracle(HMNonlinearMap::shear_preset().op(), p), 1e-15));
  }
  SECTION("same seed, same report") {
    const HMNonlinearMap t(ComplexMatrix::Identity(3, 3) * 2.0);  // linear in effect
    const SignalingReport a = search_witness(t, SpaceStructure{3, 3}, BipartiteSplit{{0}, {1}}, 40,
                                             kSignalingTol, 99);
    const SignalingReport b = search_witness(t, SpaceStructure{3, 3}, BipartiteSplit{{0}, {1}}, 40,
                                             kSignalingTol, 99);
    CHECK(a.verdict == b.verdict);
    CHECK(a.deviation == b.deviation);
    CHECK(a.samples_used == b.samples_used);

    Rng rng(3);
    const HMNonlinearMap g(gaussian_matrix(3, 3, rng));
    const SignalingReport c =
        search_witness(g, SpaceStructure{2, 3}, BipartiteSplit{{0}, {1}}, 40, kSignalingTol, 5);
    const SignalingReport d =
        search_witness(g, SpaceStructure{2, 3}, BipartiteSplit{{0}, {1}}, 40, kSignalingTol, 5);
    REQUIRE(c.witness.has_value());
    REQUIRE(d.witness.has_value());
    CHECK(c.witness->matrix() == d.witness->matrix());
    CHECK(c.witness_origin == d.witness_origin);
    CHECK(c.deviation == d.deviation);
  }
  SECTION("zero samples") {
    CHECK_THROWS_AS(search_witness(QuantumMap::identity(3), output_space(), kSplit, 0, 1e-6, 1),
                    UsageError);
  }
}

TEST_CASE("classify", "[signaling]") {
  SECTION("dephasing channel is linear") {
    const MapClassification c =
        classify(KrausChannel::dephasing(3), output_space(), kSplit, 50, kSignalingTol, 1);
    CHECK(c.linear);
    CHECK_FALSE(c.signaling);
    CHECK(c.label == MapClass::linear);
    CHECK(to_string(c.label) == "L");
  }
  SECTION("shear preset is signaling") {
    const MapClassification c =
        classify(HMNonlinearMap::shear_preset(), output_space(), kSplit, 50, kSignalingTol, 1);
    CHECK_FALSE(c.linear);
    CHECK(c.signaling);
    CHECK(c.label == MapClass::signaling);
    CHECK(to_string(c.label) == "S");
  }
  SECTION("purity-weighted phase map is nonlinear but does not signal") {
    const SpaceStructure s = output_space();
    const QuantumMap m = testing::purity_phase_map(s, {kFactorE});
    // Brute-force check that it is nonlinear and leaves Tr_e alone.
    Rng rng(8);
    CHECK(linearity_probe(m, s, 10, 1e-9, rng).max_deviation > 1e-6);
    for (int k = 0; k < 50; ++k) {
      const DensityOperator rho = random_density(s, rng);
      CHECK(max_abs_diff(partial_trace(m.apply(rho), {0, 1}).matrix(),
                         partial_trace(rho, {0, 1}).matrix()) < 1e-12);
    }
    const MapClassification c = classify(m, s, kSplit, 100, kSignalingTol, 1);
    CHECK_FALSE(c.linear);
    CHECK_FALSE(c.signaling);
    CHECK(c.label == MapClass::nonlinear_nonsignaling);
    CHECK(to_string(c.label) == "NL-nonsignaling");
  }
  SECTION("a map that is linear and signals is a framework violation") {
    // A global unitary is linear but not local to e, so it moves the lab
    // marginal; treated as an e-side map it must be rejected, not labeled.
    Rng rng(4);
    const ComplexMatrix u = haar_isometry(12, 12, rng);
    const QuantumMap global = KrausChannel({u});
    CHECK_THROWS_AS(classify(global, output_space(), kSplit, 20, kSignalingTol, 1),
                    FrameworkViolationError);
  }
  SECTION("product maps") {
    Rng rng(6);
    const LocalProductMap lin(output_space(), kSplit, random_kraus_channel(4, rng),
                              random_kraus_channel(3, rng));
    CHECK(classify(lin, 30, kSignalingTol, 2).label == MapClass::linear);
    const LocalProductMap nl(output_space(), kSplit, QuantumMap::identity(4),
                             HMNonlinearMap::shear_preset());
    CHECK(classify(nl, 30, kSignalingTol, 2).label == MapClass::signaling);
  }
}
