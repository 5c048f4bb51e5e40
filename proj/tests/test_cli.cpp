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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

#include "hbell/cli.hpp"
#include "hbell/io.hpp"
#include "hbell/random.hpp"

using namespace hbell;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hbell_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<ScanRow> parse_csv(const std::string& text) {
  std::istringstream is(text);
  return io::read_scan_csv(is);
}

}  // namespace

TEST_CASE("scan", "[cli]") {
  SECTION("identity 8x8 gives 64 rows plus header") {
    const Result r = run({"scan", "--map", "identity", "--phi-steps", "8", "--theta-steps", "8",
                          "--out", "-"});
    REQUIRE(r.code == cli::kOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 65);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 64);
    for (const auto& row : rows) {
      CHECK(row.p_a >= 0.0);
      CHECK(row.p_a <= 1.0);
      CHECK(row.p_b >= 0.0);
      CHECK(row.p_b <= 1.0);
    }
  }
  SECTION("hm-eq12 signal vanishes where a = b") {
    const Result r = run({"scan", "--map", "hm-eq12"});
    REQUIRE(r.code == cli::kOk);
    int hits = 0;
    for (const auto& row : parse_csv(r.out)) {
      if (std::abs(row.theta - std::numbers::pi / 4.0) < 1e-15) {
        CHECK(std::abs(row.signal) < 1e-12);
        ++hits;
      }
    }
    CHECK(hits == 8);
  }
  SECTION("a Kraus file gives the identity surface") {
    Rng rng(17);
    const auto path = scratch("channel.json");
    io::save_map_file(path, random_kraus_channel(3, rng));
    const Result id = run({"scan", "--map", "identity"});
    const Result kr = run({"scan", "--map", "kraus:" + path.string()});
    REQUIRE(kr.code == cli::kOk);
    const auto a = parse_csv(id.out);
    const auto b = parse_csv(kr.out);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].signal - b[i].signal) < 1e-10);
  }
  SECTION("config file with flag overrides, JSON output to a file") {
    const auto cfg = scratch("run.json");
    const auto out = scratch("scan.json");
    std::ofstream(cfg) << R"({"params":{"V":0.05,"f1":0.1,"f2":0.1},"phi_steps":3,
                              "theta_steps":5,"map":"hm-eq12","format":"json"})";
    const Result r = run({"scan", "--config", cfg.string(), "--theta-steps", "2", "--out",
                          out.string()});
    REQUIRE(r.code == cli::kOk);
    std::ifstream in(out);
    const auto j = io::json::parse(in);
    CHECK(j["rows"].size() == 6);
    CHECK(j["params"]["V"][0] == 0.05);
  }
  SECTION("bad configuration exits 2") {
    CHECK(run({"scan", "--phi-steps", "0"}).code == cli::kBadConfig);
    CHECK(run({"scan", "--format", "xml"}).code == cli::kBadConfig);
    CHECK(run({"scan", "--map", "nope.json"}).code == cli::kBadConfig);
    CHECK(run({"scan", "--config", scratch("absent.json").string()}).code == cli::kBadConfig);
    const auto cfg = scratch("badkey.json");
    std::ofstream(cfg) << R"({"steps": 3})";
    CHECK(run({"scan", "--config", cfg.string()}).code == cli::kBadConfig);
    CHECK(run({"frobnicate"}).code == cli::kBadConfig);
    CHECK(run({}).code == cli::kBadConfig);
  }
}

TEST_CASE("verify-nosignal", "[cli]") {
  SECTION("passes and is deterministic") {
    const Result a = run({"verify-nosignal", "--samples", "300", "--seed", "5", "--tol", "1e-9"});
    REQUIRE(a.code == cli::kOk);
    const auto j = io::json::parse(a.out);
    CHECK(j["passed"] == true);
    CHECK(j["max_deviation"].get<double>() < 1e-9);
    const Result b = run({"verify-nosignal", "--samples", "300", "--seed", "5", "--tol", "1e-9"});
    CHECK(a.out == b.out);
  }
  SECTION("zero samples") {
    CHECK(run({"verify-nosignal", "--samples", "0"}).code == cli::kBadConfig);
  }
  SECTION("an impossible tolerance reports violations with exit 1") {
    const Result r = run({"verify-nosignal", "--samples", "5", "--tol", "-1"});
    CHECK(r.code == cli::kViolation);
    const auto j = io::json::parse(r.out);
    CHECK(j["violations"].size() == 5);
    CHECK(j["violations"][0]["channel"]["kind"] == "kraus");
  }
}

TEST_CASE("classify", "[cli]") {
  SECTION("presets") {
    const Result hm = run({"classify", "--map", "hm-eq12", "--samples", "30"});
    REQUIRE(hm.code == cli::kOk);
    CHECK(io::json::parse(hm.out)["class_label"] == "S");
    const Result id = run({"classify", "--map", "identity", "--samples", "30"});
    REQUIRE(id.code == cli::kOk);
    CHECK(io::json::parse(id.out)["class_label"] == "L");
  }
  SECTION("dephasing file") {
    const auto path = scratch("dephase.json");
    io::save_map_file(path, KrausChannel::dephasing(3));
    const Result r = run({"classify", "--map", path.string(), "--samples", "30"});
    REQUIRE(r.code == cli::kOk);
    const auto j = io::json::parse(r.out);
    CHECK(j["class_label"] == "L");
    CHECK(j["signaling"] == false);
  }
  SECTION("malformed file") {
    const auto path = scratch("malformed.json");
    std::ofstream(path) << R"({"kind":"kraus","dim":3})";
    CHECK(run({"classify", "--map", path.string()}).code == cli::kBadConfig);
    CHECK(run({"classify"}).code == cli::kBadConfig);
  }
}

TEST_CASE("demo", "[cli]") {
  const auto dir = scratch("demo");
  std::filesystem::remove_all(dir);
  const Result r = run({"demo", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  std::ifstream lin(dir / "demo_linear.csv");
  std::ifstream hm(dir / "demo_hm.csv");
  std::stringstream ls;
  std::stringstream hs;
  ls << lin.rdbuf();
  hs << hm.rdbuf();
  const auto lrows = parse_csv(ls.str());
  const auto hrows = parse_csv(hs.str());
  CHECK(lrows.size() == 4096);
  CHECK(hrows.size() == 4096);
  const auto summary = io::json::parse(r.out);
  const double shift = summary["shift"];
  CHECK(std::abs(shift - std::numbers::pi / 4.0) <= std::numbers::pi / 64.0);

  // Linear file at theta = 0: amplitude (|V|^2 / N^2) 2 |f1 f2| in phase.
  double peak = 0.0;
  for (const auto& row : lrows) {
    if (row.theta == 0.0) peak = std::max(peak, std::abs(row.signal));
  }
  CHECK(std::abs(peak - 0.01 / 1.0002 * 2.0 * 0.01) < 1e-15);
}

TEST_CASE("executable exit codes", "[cli]") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(HBELL_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("scan --phi-steps 2 --theta-steps 2") == 0);
  CHECK(status("verify-nosignal --samples 0") == 2);
  CHECK(status("classify --map hm-eq12 --samples 10") == 0);
  CHECK(status("--help") == 0);
}
