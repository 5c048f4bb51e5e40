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

#include "hbell/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hbell/errors.hpp"
#include "hbell/io.hpp"
#include "hbell/random.hpp"
#include "hbell/signaling.hpp"

namespace hbell::cli {

using io::json;

void RunConfig::validate() const {
  if (phi_steps == 0 || theta_steps == 0) throw UsageError("grid steps must be >= 1");
  if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
  params.validate();
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "params") {
        c.params = io::params_from_json(value);
      } else if (key == "phi_steps") {
        c.phi_steps = value.get<std::size_t>();
      } else if (key == "theta_steps") {
        c.theta_steps = value.get<std::size_t>();
      } else if (key == "map") {
        c.map_spec = value.get<std::string>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        c.output_path = value.get<std::string>();
      } else if (key == "format") {
        c.format = value.get<std::string>();
      } else {
        throw FormatError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return c;
}

namespace {

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
  } else {
    io::write_atomically(path, content);
  }
}

std::string render_scan(const ScanResult& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << io::scan_to_json(r).dump(2) << '\n';
  } else {
    io::write_scan_csv(os, r);
  }
  return os.str();
}

ScanResult run_scan(const InterferometerParams& params, std::size_t phi_steps,
                    std::size_t theta_steps, const QuantumMap& map) {
  const auto phases = uniform_grid(0.0, 2.0 * std::numbers::pi, phi_steps);
  const auto thetas = uniform_grid(0.0, std::numbers::pi, theta_steps);
  return scan(params, phases, thetas, map);
}

void warn_regime(const InterferometerParams& p, std::ostream& err) {
  for (const auto& w : p.regime_warnings()) err << "warning: " << w << '\n';
}

int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  warn_regime(config.params, err);
  const QuantumMap map = io::resolve_map_spec(config.map_spec);
  const ScanResult r = run_scan(config.params, config.phi_steps, config.theta_steps, map);
  emit(config.output_path, render_scan(r, config.format), out);
  return kOk;
}

// Random state on the output space: the interferometer family with random
// settings, a Haar pure state, or a Hilbert-Schmidt mixed state.
DensityOperator nosignal_test_state(std::size_t index, Rng& rng) {
  std::uniform_real_distribution<double> mag(0.01, 0.3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  switch (index % 3) {
    case 0: {
      InterferometerParams p;
      p.pump = std::polar(mag(rng), angle(rng));
      p.eff1 = std::polar(mag(rng), angle(rng));
      p.eff2 = std::polar(mag(rng), angle(rng));
      p = p.at(angle(rng), angle(rng) / 2.0);
      p.rot_b *= std::polar(1.0, angle(rng));
      return DensityOperator::pure(build_output_state(p));
    }
    case 1:
      return DensityOperator::pure(random_pure_state(output_space(), rng));
    default:
      return random_density(output_space(), rng);
  }
}

int cmd_verify_nosignal(std::size_t samples, std::uint64_t seed, double tol,
                        const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (samples == 0) throw UsageError("--samples must be >= 1");
  const std::size_t lab[] = {kFactorU, kFactorD};
  constexpr std::size_t kMaxListed = 10;
  double worst = 0.0;
  std::size_t worst_sample = 0;
  std::size_t failures = 0;
  json violations = json::array();
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const KrausChannel ch = random_kraus_channel(3, rng);
    const DensityOperator rho = nosignal_test_state(i, rng);
    const QuantumMap lifted = lift_local(ch, output_space(), kFactorE);
    const double dev = reduced_deviation(lifted, rho, lab);
    if (dev > worst) {
      worst = dev;
      worst_sample = i;
    }
    if (!(dev < tol)) {
      ++failures;
      if (violations.size() < kMaxListed) {
        violations.push_back({{"sample", i},
                              {"deviation", dev},
                              {"channel", io::map_to_json(ch)},
                              {"state", io::matrix_to_json(rho.matrix())}});
      }
    }
  }
  const json report = {{"command", "verify-nosignal"},
                       {"samples", samples},
                       {"seed", seed},
                       {"tol", tol},
                       {"max_deviation", worst},
                       {"worst_sample", worst_sample},
                       {"failures", failures},
                       {"passed", failures == 0},
                       {"violations", std::move(violations)}};
  emit(out_path, report.dump(2) + "\n", out);
  if (failures != 0) {
    err << "no-signaling violated in " << failures << " of " << samples << " samples\n";
    return kViolation;
  }
  return kOk;
}

int cmd_classify(const std::string& map_spec, std::size_t samples, std::uint64_t seed, double tol,
                 const std::string& out_path, std::ostream& out) {
  if (samples == 0) throw UsageError("--samples must be >= 1");
  const QuantumMap map = io::resolve_map_spec(map_spec);
  const SpaceStructure space{2, 2, map.dim()};
  const BipartiteSplit split{{kFactorU, kFactorD}, {kFactorE}};
  const MapClassification c = classify(map, space, split, samples, tol, seed);
  json j = io::classification_to_json(c);
  j["map"] = map.describe();
  j["seed"] = seed;
  j["samples"] = samples;
  emit(out_path, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_demo(const std::string& out_dir, std::size_t steps, std::ostream& out,
             std::ostream& err) {
  if (steps == 0) throw UsageError("--phi-steps/--theta-steps must be >= 1");
  const InterferometerParams params;  // V = f1 = f2 = 0.1
  const ScanResult linear = run_scan(params, steps, steps, QuantumMap::identity(3));
  const ScanResult hm = run_scan(params, steps, steps, HMNonlinearMap::shear_preset());

  std::filesystem::create_directories(out_dir);
  const auto linear_path = std::filesystem::path(out_dir) / "demo_linear.csv";
  const auto hm_path = std::filesystem::path(out_dir) / "demo_hm.csv";
  io::write_atomically(linear_path, render_scan(linear, "csv"));
  io::write_atomically(hm_path, render_scan(hm, "csv"));

  // The linear signal is extremal in phase at pi/2 for real f1 = f2.
  const std::size_t phase_index = steps / 4;
  const double t_lin = theta_argmax(linear, phase_index);
  const double t_hm = theta_argmax(hm, phase_index);
  const json summary = {{"linear_csv", linear_path.string()},
                        {"hm_csv", hm_path.string()},
                        {"rows", linear.rows.size()},
                        {"phase", linear.rows[phase_index * steps].phase},
                        {"linear_theta_argmax", t_lin},
                        {"hm_theta_argmax", t_hm},
                        {"shift", angle_distance_mod_pi(t_lin, t_hm)}};
  out << summary.dump(2) << '\n';
  err << "wrote " << linear_path.string() << " and " << hm_path.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-crystal interferometer simulator: linear and nonlinear evolution of the "
               "escaping beam, and no-signaling checks",
               "hbell"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  auto* scan_cmd = app.add_subcommand("scan", "Emit the (phi, theta) click-probability grid");
  scan_cmd->add_option("--config", config_path, "JSON run configuration");
  auto* o_phi = scan_cmd->add_option("--phi-steps", cfg.phi_steps, "Phase grid points on [0, 2pi)");
  auto* o_theta =
      scan_cmd->add_option("--theta-steps", cfg.theta_steps, "Rotator grid points on [0, pi)");
  auto* o_map = scan_cmd->add_option("--map", cfg.map_spec, "identity | hm-eq12 | kraus:<file> | <file>");
  auto* o_seed = scan_cmd->add_option("--seed", cfg.seed, "Random seed");
  auto* o_out = scan_cmd->add_option("--out", cfg.output_path, "Output path, - for stdout");
  auto* o_fmt = scan_cmd->add_option("--format", cfg.format, "csv | json");

  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double tol = kLinearityTol;
  std::string out_path = "-";
  auto* verify_cmd =
      app.add_subcommand("verify-nosignal", "Check that random Kraus channels on e never signal");
  verify_cmd->add_option("--samples", samples, "Number of (channel, state) pairs");
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--tol", tol, "Maximum allowed reduced-state deviation");
  verify_cmd->add_option("--out", out_path, "Report path, - for stdout");

  std::string map_spec;
  std::size_t classify_samples = 200;
  double classify_tol = kSignalingTol;
  std::uint64_t classify_seed = 1;
  std::string classify_out = "-";
  auto* classify_cmd = app.add_subcommand("classify", "Classify a map as L, NL-nonsignaling or S");
  classify_cmd->add_option("--map", map_spec, "identity | hm-eq12 | kraus:<file> | <file>")
      ->required();
  classify_cmd->add_option("--samples", classify_samples, "Random samples per probe");
  classify_cmd->add_option("--seed", classify_seed, "Random seed");
  classify_cmd->add_option("--tol", classify_tol, "Signaling threshold");
  classify_cmd->add_option("--out", classify_out, "Report path, - for stdout");

  std::string demo_dir = ".";
  std::size_t demo_steps = 64;
  auto* demo_cmd =
      app.add_subcommand("demo", "Write linear and nonlinear signal surfaces side by side");
  demo_cmd->add_option("--out", demo_dir, "Output directory");
  demo_cmd->add_option("--theta-steps,--phi-steps", demo_steps, "Grid points per axis");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "hbell: " << e.what() << '\n';
    return kBadConfig;
  }

  try {
    if (scan_cmd->parsed()) {
      RunConfig run_cfg = cfg;
      if (!config_path.empty()) {
        run_cfg = load_run_config(config_path);
        if (o_phi->count()) run_cfg.phi_steps = cfg.phi_steps;
        if (o_theta->count()) run_cfg.theta_steps = cfg.theta_steps;
        if (o_map->count()) run_cfg.map_spec = cfg.map_spec;
        if (o_seed->count()) run_cfg.seed = cfg.seed;
        if (o_out->count()) run_cfg.output_path = cfg.output_path;
        if (o_fmt->count()) run_cfg.format = cfg.format;
      }
      return cmd_scan(run_cfg, out, err);
    }
    if (verify_cmd->parsed()) return cmd_verify_nosignal(samples, seed, tol, out_path, out, err);
    if (classify_cmd->parsed()) {
      return cmd_classify(map_spec, classify_samples, classify_seed, classify_tol, classify_out,
                          out);
    }
    if (demo_cmd->parsed()) return cmd_demo(demo_dir, demo_steps, out, err);
  } catch (const NumericalIntegrityError& e) {
    err << "hbell: numerical integrity: " << e.what() << '\n';
    return kNumerical;
  } catch (const FrameworkViolationError& e) {
    err << "hbell: framework violation: " << e.what() << '\n';
    return kFrameworkViolation;
  } catch (const Error& e) {
    err << "hbell: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "hbell: " << e.what() << '\n';
    return kBadConfig;
  }
  return kBadConfig;
}

}  // namespace hbell::cli
