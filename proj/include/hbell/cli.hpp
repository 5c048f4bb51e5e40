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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hbell/interferometer.hpp"

namespace hbell::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kBadConfig = 2,
  kNumerical = 3,
  kFrameworkViolation = 4,
};

struct RunConfig {
  InterferometerParams params;
  std::size_t phi_steps = 8;
  std::size_t theta_steps = 8;
  std::string map_spec = "identity";
  std::uint64_t seed = 1;
  std::string output_path = "-";
  std::string format = "csv";

  /// Throws UsageError on zero steps or an unknown format.
  void validate() const;
};

/// Reads a JSON config; absent keys keep their defaults. Recognized keys:
/// params, phi_steps, theta_steps, map, seed, out, format.
RunConfig load_run_config(const std::filesystem::path& path);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Data goes to `out` when the output path is "-".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbell::cli
