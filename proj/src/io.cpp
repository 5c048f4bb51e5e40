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

#include "hbell/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hbell/errors.hpp"

namespace hbell::io {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw FormatError("expected a number or an [re, im] pair, got " + j.dump());
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw FormatError("matrix must be a nonempty array of nonempty rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError("matrix rows must all have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array()) throw FormatError("matrix entries must be [re, im] pairs");
      m(i, k) = complex_from_json(e);
    }
  }
  return m;
}

json map_to_json(const QuantumMap& map) {
  json j;
  j["dim"] = map.dim();
  switch (map.kind()) {
    case QuantumMap::Kind::identity: {
      const auto d = static_cast<Eigen::Index>(map.dim());
      j["kind"] = "kraus";
      j["operators"] = json::array({matrix_to_json(ComplexMatrix::Identity(d, d))});
      break;
    }
    case QuantumMap::Kind::kraus: {
      j["kind"] = "kraus";
      json ops = json::array();
      for (const auto& e : std::get<KrausChannel>(map.variant()).operators()) {
        ops.push_back(matrix_to_json(e));
      }
      j["operators"] = std::move(ops);
      break;
    }
    case QuantumMap::Kind::hm:
      j["kind"] = "hm";
      j["T"] = matrix_to_json(std::get<HMNonlinearMap>(map.variant()).op());
      break;
    case QuantumMap::Kind::general:
      throw UsageError("general maps cannot be serialized");
  }
  return j;
}

QuantumMap map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw FormatError("map file must be an object with a string \"kind\"");
  }
  if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
    throw FormatError("map file needs a positive integer \"dim\"");
  }
  const auto dim = static_cast<Eigen::Index>(j["dim"].get<std::size_t>());
  const std::string kind = j["kind"];
  auto check_shape = [&](const ComplexMatrix& m, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
      throw FormatError(std::string(what) + " must be " + std::to_string(dim) + "x" +
                        std::to_string(dim));
    }
  };
  if (kind == "kraus") {
    if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
      throw FormatError("kraus map needs a nonempty \"operators\" array");
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& o : j["operators"]) {
      ops.push_back(matrix_from_json(o));
      check_shape(ops.back(), "Kraus operator");
    }
    return KrausChannel(std::move(ops));
  }
  if (kind == "hm") {
    if (!j.contains("T")) throw FormatError("hm map needs \"T\"");
    ComplexMatrix t = matrix_from_json(j["T"]);
    check_shape(t, "T");
    return HMNonlinearMap(std::move(t));
  }
  throw FormatError("unknown map kind '" + kind + "'");
}

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

QuantumMap load_map_file(const std::filesystem::path& path) {
  try {
    return map_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_map_file(const std::filesystem::path& path, const QuantumMap& map) {
  write_atomically(path, map_to_json(map).dump(2) + "\n");
}

QuantumMap resolve_map_spec(const std::string& spec) {
  if (spec == "identity") return QuantumMap::identity(3);
  if (spec == "hm-eq12") return HMNonlinearMap::shear_preset();
  std::string path = spec;
  const bool kraus_only = spec.rfind("kraus:", 0) == 0;
  if (kraus_only) path = spec.substr(6);
  if (path.empty()) throw FormatError("empty map specification");
  QuantumMap map = load_map_file(path);
  if (kraus_only && map.kind() != QuantumMap::Kind::kraus) {
    throw FormatError(path + " does not describe a Kraus channel");
  }
  return map;
}

void write_scan_csv(std::ostream& os, const ScanResult& result) {
  os << "phi,theta,p_A,p_B,signal\n";
  for (const auto& r : result.rows) {
    os << fmt17(r.phase) << ',' << fmt17(r.theta) << ',' << fmt17(r.p_a) << ','
       << fmt17(r.p_b) << ',' << fmt17(r.signal) << '\n';
  }
}

std::vector<ScanRow> read_scan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "phi,theta,p_A,p_B,signal") {
    throw FormatError("scan CSV must start with the header phi,theta,p_A,p_B,signal");
  }
  std::vector<ScanRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double v[5];
    for (int k = 0; k < 5; ++k) {
      if (!std::getline(ls, cell, ',')) throw FormatError("short CSV row: " + line);
      std::size_t used = 0;
      try {
        v[k] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw FormatError("non-numeric CSV cell: " + cell);
      }
      if (used != cell.size()) throw FormatError("non-numeric CSV cell: " + cell);
    }
    if (std::getline(ls, cell, ',')) throw FormatError("long CSV row: " + line);
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

json params_to_json(const InterferometerParams& p) {
  auto c = [](Complex z) { return json::array({z.real(), z.imag()}); };
  return {{"V", c(p.pump)}, {"f1", c(p.eff1)}, {"f2", c(p.eff2)},
          {"phi", p.phase}, {"a", c(p.rot_a)}, {"b", c(p.rot_b)}};
}

InterferometerParams params_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("params must be a JSON object");
  InterferometerParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "V") {
      p.pump = complex_from_json(value);
    } else if (key == "f1") {
      p.eff1 = complex_from_json(value);
    } else if (key == "f2") {
      p.eff2 = complex_from_json(value);
    } else if (key == "phi") {
      if (!value.is_number()) throw FormatError("phi must be a number (radians)");
      p.phase = value.get<double>();
    } else if (key == "a") {
      p.rot_a = complex_from_json(value);
    } else if (key == "b") {
      p.rot_b = complex_from_json(value);
    } else if (key == "theta") {
      if (!value.is_number()) throw FormatError("theta must be a number (radians)");
    } else {
      throw FormatError("unknown params key '" + key + "'");
    }
  }
  if (j.contains("theta")) {
    if (j.contains("a") || j.contains("b")) throw FormatError("give either theta or a/b");
    p = p.at(p.phase, j["theta"].get<double>());
  }
  p.validate();
  return p;
}

json scan_to_json(const ScanResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"phi", r.phase},
                    {"theta", r.theta},
                    {"p_A", r.p_a},
                    {"p_B", r.p_b},
                    {"signal", r.signal}});
  }
  return {{"params", params_to_json(result.params)},
          {"map", result.map_description},
          {"grid", {result.phase_steps, result.theta_steps}},
          {"rows", std::move(rows)}};
}

json report_to_json(const SignalingReport& r) {
  json j = {{"verdict", to_string(r.verdict)},
            {"deviation", r.deviation},
            {"tolerance", r.tolerance},
            {"samples_used", r.samples_used}};
  if (r.witness) {
    j["witness"] = {{"origin", r.witness_origin},
                    {"dims", r.witness->space().dims()},
                    {"rho", matrix_to_json(r.witness->matrix())}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json classification_to_json(const MapClassification& c) {
  return {{"linear", c.linear},
          {"signaling", c.signaling},
          {"class_label", to_string(c.label)},
          {"linearity_deviation", c.linearity_deviation},
          {"report", report_to_json(c.report)}};
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace hbell::io
