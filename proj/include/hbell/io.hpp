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

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "hbell/interferometer.hpp"
#include "hbell/maps.hpp"
#include "hbell/signaling.hpp"

namespace hbell::io {

using nlohmann::json;

/// Nested rows of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& m);
/// Throws FormatError on ragged or non-numeric input.
ComplexMatrix matrix_from_json(const json& j);

/// A number or an [re, im] pair.
Complex complex_from_json(const json& j);

/// {"kind": "kraus", "dim": n, "operators": [...]} or
/// {"kind": "hm", "dim": n, "T": ...}. The identity is written as a
/// one-operator Kraus channel; general maps have no file form.
json map_to_json(const QuantumMap& map);
QuantumMap map_from_json(const json& j);

QuantumMap load_map_file(const std::filesystem::path& path);
void save_map_file(const std::filesystem::path& path, const QuantumMap& map);

/// Resolves "identity", "hm-eq12", "kraus:<file>" or a map file path to a map
/// on the escaping beam.
QuantumMap resolve_map_spec(const std::string& spec);

/// Header `phi,theta,p_A,p_B,signal`, 17 significant digits.
void write_scan_csv(std::ostream& os, const ScanResult& result);
/// Rows only; throws FormatError on a bad header or row.
std::vector<ScanRow> read_scan_csv(std::istream& is);
json scan_to_json(const ScanResult& result);

json params_to_json(const InterferometerParams& p);
InterferometerParams params_from_json(const json& j);

json report_to_json(const SignalingReport& r);
json classification_to_json(const MapClassification& c);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace hbell::io
