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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hbell/errors.hpp"
#include "hbell/io.hpp"
#include "hbell/random.hpp"

using namespace hbell;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hbell_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("map files round-trip exactly", "[io]") {
  Rng rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausChannel ch = random_kraus_channel(3, rng);
    const auto path = temp_path("kraus.json");
    io::save_map_file(path, ch);
    const QuantumMap back = io::load_map_file(path);
    REQUIRE(back.kind() == QuantumMap::Kind::kraus);
    const auto& ops = std::get<KrausChannel>(back.variant()).operators();
    REQUIRE(ops.size() == ch.operators().size());
    for (std::size_t j = 0; j < ops.size(); ++j) CHECK(ops[j] == ch.operators()[j]);
  }
  const HMNonlinearMap hm(gaussian_matrix(3, 3, rng));
  const auto path = temp_path("hm.json");
  io::save_map_file(path, hm);
  const QuantumMap back = io::load_map_file(path);
  REQUIRE(back.kind() == QuantumMap::Kind::hm);
  CHECK(std::get<HMNonlinearMap>(back.variant()).op() == hm.op());
}

TEST_CASE("map file errors", "[io]") {
  using io::json;
  CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"kind":"unitary","dim":2})")), FormatError);
  CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"kind":"kraus"})")), FormatError);
  CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"kind":"hm","dim":2,"T":[[[1,0]],[[0,0]]]})")),
                  FormatError);
  CHECK_THROWS_AS(
      io::map_from_json(json::parse(R"({"kind":"kraus","dim":1,"operators":[[[[0.5,0]]]]})")),
      InvalidChannelError);
  CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"kind":"hm","dim":1,"T":[[[0,0]]]})")),
                  InvalidMapError);
  const auto path = temp_path("broken.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(io::load_map_file(path), FormatError);
  CHECK_THROWS_AS(io::load_map_file(temp_path("missing.json")), FormatError);
}

TEST_CASE("map specifications", "[io]") {
  CHECK(io::resolve_map_spec("identity").kind() == QuantumMap::Kind::identity);
  const QuantumMap hm = io::resolve_map_spec("hm-eq12");
  REQUIRE(hm.kind() == QuantumMap::Kind::hm);
  CHECK(std::get<HMNonlinearMap>(hm.variant()).op() == HMNonlinearMap::shear_preset().op());

  const auto hm_path = temp_path("spec_hm.json");
  io::save_map_file(hm_path, HMNonlinearMap::shear_preset());
  CHECK_THROWS_AS(io::resolve_map_spec("kraus:" + hm_path.string()), FormatError);
  CHECK(io::resolve_map_spec(hm_path.string()).kind() == QuantumMap::Kind::hm);
  const auto k_path = temp_path("spec_k.json");
  io::save_map_file(k_path, KrausChannel::dephasing(3));
  CHECK(io::resolve_map_spec("kraus:" + k_path.string()).kind() == QuantumMap::Kind::kraus);
}

TEST_CASE("scan CSV", "[io]") {
  ScanResult r;
  r.rows = {{0.0, 0.1, 1.0 / 3.0, 2e-4 / 1.0002, 1.0 / 3.0 - 2e-4 / 1.0002},
            {6.2, 3.0, 0.0, 1.0, -1.0}};
  std::ostringstream os;
  io::write_scan_csv(os, r);
  const std::string text = os.str();
  CHECK(text.rfind("phi,theta,p_A,p_B,signal\n", 0) == 0);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  std::istringstream is(text);
  const auto rows = io::read_scan_csv(is);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rows[i].phase == r.rows[i].phase);
    CHECK(rows[i].theta == r.rows[i].theta);
    CHECK(rows[i].p_a == r.rows[i].p_a);
    CHECK(rows[i].p_b == r.rows[i].p_b);
    CHECK(rows[i].signal == r.rows[i].signal);
  }
  std::istringstream bad("phi,theta\n1,2\n");
  CHECK_THROWS_AS(io::read_scan_csv(bad), FormatError);
  std::istringstream bad_cell("phi,theta,p_A,p_B,signal\n1,2,x,4,5\n");
  CHECK_THROWS_AS(io::read_scan_csv(bad_cell), FormatError);
}

TEST_CASE("params JSON", "[io]") {
  using io::json;
  const InterferometerParams p =
      io::params_from_json(json::parse(R"({"V":[0.1,0.02],"f1":0.1,"f2":0.05,"phi":1.5,"theta":0.5})"));
  CHECK(p.pump == Complex(0.1, 0.02));
  CHECK(p.eff2 == Complex(0.05, 0.0));
  CHECK(p.rot_a.real() == std::cos(0.5));
  const InterferometerParams q = io::params_from_json(io::params_to_json(p));
  CHECK(q.pump == p.pump);
  CHECK(q.rot_b == p.rot_b);
  CHECK(q.phase == p.phase);
  CHECK_THROWS_AS(io::params_from_json(json::parse(R"({"a":1,"b":1})")), UsageError);
  CHECK_THROWS_AS(io::params_from_json(json::parse(R"({"phase":1})")), FormatError);
  CHECK_THROWS_AS(io::params_from_json(json::parse(R"({"theta":1,"a":1})")), FormatError);
}

TEST_CASE("atomic writes replace the target", "[io]") {
  const auto path = temp_path("atomic.txt");
  io::write_atomically(path, "first");
  io::write_atomically(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}
