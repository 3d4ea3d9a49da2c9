// Command-line front end: run scenarios, validate against reference
// summaries, and export plot-ready channel series.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ehsim/sim_engine.hpp"
#include "ehsim/spatial.hpp"

namespace fs = std::filesystem;
using namespace ehsim;

namespace {

// Exit codes are the machine contract.
constexpr int kOk = 0;
constexpr int kInvalidScenario = 1;
constexpr int kNumericalFault = 2;
constexpr int kValidationFailure = 3;

struct Overrides {
  std::optional<double> dt;
  std::optional<double> duration;
};

void applyOverrides(Scenario& s, const Overrides& o) {
  if (o.dt) {
    if (!(*o.dt > 0.0)) throw ScenarioError("--dt must be positive");
    s.dt_s = *o.dt;
  }
  if (o.duration) {
    if (!(*o.duration > 0.0)) throw ScenarioError("--duration must be positive");
    s.duration_s = *o.duration;
  }
  if (s.sample_interval_s < s.dt_s) s.sample_interval_s = s.dt_s;
  if (s.pose_goal && s.duration_s < s.pose_goal->profile.t_total_s) {
    throw ScenarioError("--duration is shorter than maneuver.profile.t_total_s");
  }
  if (s.joint_goal && s.duration_s < s.joint_goal->profile.t_total_s) {
    throw ScenarioError("--duration is shorter than maneuver.joint_profile.t_total_s");
  }
}

void printSummary(const RunSummary& s) {
  std::printf("scenario: %s\n", s.scenario_name.c_str());
  std::printf("  final position        (%.6f, %.6f, %.6f) m\n", s.final_position_m.x(),
              s.final_position_m.y(), s.final_position_m.z());
  std::printf("  final attitude rpy    (%.6f, %.6f, %.6f) rad\n", s.final_rpy_rad.x(),
              s.final_rpy_rad.y(), s.final_rpy_rad.z());
  std::printf("  final pose error      %.3e m, %.3e rad\n", s.final_position_error_m,
              s.final_attitude_error_rad);
  std::printf("  final joint error     pan %.3e rad, pitch %.3e rad, extension %.3e m\n",
              s.final_pan_error_rad, s.final_pitch_error_rad, s.final_extension_error_m);
  std::printf("  max |force|           (%.4g, %.4g, %.4g) N\n", s.max_abs_force_n.x(),
              s.max_abs_force_n.y(), s.max_abs_force_n.z());
  std::printf("  max |torque|          (%.4g, %.4g, %.4g) N m\n", s.max_abs_torque_nm.x(),
              s.max_abs_torque_nm.y(), s.max_abs_torque_nm.z());
  std::printf("  unsigned impulse      (%.6g, %.6g, %.6g) N s\n", s.impulse_unsigned_ns.x(),
              s.impulse_unsigned_ns.y(), s.impulse_unsigned_ns.z());
  std::printf("  net impulse           (%.4g, %.4g, %.4g) N s\n", s.impulse_net_ns.x(),
              s.impulse_net_ns.y(), s.impulse_net_ns.z());
  std::printf("  max joint effort      pan %.4g N m, pitch %.4g N m, actuation %.4g N\n",
              s.max_pan_torque_nm, s.max_pitch_torque_nm, s.max_actuation_force_n);
  for (const auto& e : s.events) {
    std::printf("  event t=%.3f s: %s\n", e.t_s, e.what.c_str());
  }
}

int cmdSimulate(const std::string& scenario_path, const std::string& out_dir, const Overrides& o,
                bool quiet) {
  Scenario scenario;
  try {
    scenario = loadScenario(scenario_path);
    applyOverrides(scenario, o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalidScenario;
  }
  RunResult result;
  try {
    result = run(scenario);
  } catch (const SimulationFault& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalFault;
  }
  fs::create_directories(out_dir);
  writeTelemetryCsv(result.telemetry, (fs::path(out_dir) / "telemetry.csv").string());
  std::ofstream((fs::path(out_dir) / "summary.json").string()) << summaryToJson(result.summary);
  if (!quiet) printSummary(result.summary);
  return kOk;
}

int cmdValidate(const std::string& suite_path, bool quiet) {
  nlohmann::json suite;
  try {
    std::ifstream in(suite_path);
    if (!in) throw std::runtime_error("cannot open suite file: " + suite_path);
    suite = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalidScenario;
  }
  if (!suite.contains("cases") || !suite["cases"].is_array() || suite["cases"].empty()) {
    std::fprintf(stderr, "error: suite has no cases\n");
    return kInvalidScenario;
  }
  const fs::path base = fs::path(suite_path).parent_path();
  bool all_pass = true;
  for (const auto& entry : suite["cases"]) {
    const std::string name = entry.value("name", std::string("unnamed"));
    Scenario scenario;
    std::map<std::string, double> reference;
    std::map<std::string, FieldTolerance> tolerances;
    try {
      scenario = loadScenario((base / entry.at("scenario").get<std::string>()).string());
      std::ifstream ref_in((base / entry.at("reference").get<std::string>()).string());
      if (!ref_in) throw std::runtime_error("cannot open reference file");
      std::stringstream buf;
      buf << ref_in.rdbuf();
      reference = summaryFieldsFromJson(buf.str());
      for (auto it = entry.at("tolerances").begin(); it != entry.at("tolerances").end(); ++it) {
        FieldTolerance tol;
        tol.abs_tol = it.value().value("abs", 0.0);
        tol.rel_tol = it.value().value("rel", 0.0);
        tolerances[it.key()] = tol;
      }
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error in case '%s': %s\n", name.c_str(), e.what());
      return kInvalidScenario;
    }
    RunResult result;
    try {
      result = run(scenario);
    } catch (const SimulationFault& e) {
      std::fprintf(stderr, "error in case '%s': %s\n", name.c_str(), e.what());
      return kNumericalFault;
    }
    const CompareReport report = compareSummary(result.summary, reference, tolerances);
    std::printf("[%s] %s\n", report.pass ? "PASS" : "FAIL", name.c_str());
    if (!quiet) {
      for (const auto& v : report.violations) std::printf("       %s\n", v.c_str());
    }
    all_pass = all_pass && report.pass;
  }
  return all_pass ? kOk : kValidationFailure;
}

int cmdPlotData(const std::string& telemetry_path, const std::vector<std::string>& channels,
                const std::string& out_dir) {
  if (channels.empty()) {
    std::fprintf(stderr, "error: no channels requested\n");
    return kInvalidScenario;
  }
  std::ifstream in(telemetry_path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open telemetry file: %s\n", telemetry_path.c_str());
    return kInvalidScenario;
  }
  std::string header_line;
  std::getline(in, header_line);
  std::vector<std::string> headers;
  {
    std::stringstream hs(header_line);
    std::string col;
    while (std::getline(hs, col, ',')) headers.push_back(col);
  }
  std::vector<int> indices;
  for (const auto& ch : channels) {
    const auto it = std::find(headers.begin(), headers.end(), ch);
    if (it == headers.end()) {
      std::fprintf(stderr, "error: unknown channel '%s'; valid channels:\n", ch.c_str());
      for (const auto& h : headers) std::fprintf(stderr, "  %s\n", h.c_str());
      return kInvalidScenario;
    }
    indices.push_back(static_cast<int>(it - headers.begin()));
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != headers.size()) {
      std::fprintf(stderr, "error: malformed telemetry row\n");
      return kInvalidScenario;
    }
    rows.push_back(std::move(row));
  }

  fs::create_directories(out_dir);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const fs::path path = fs::path(out_dir) / (channels[c] + ".dat");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
      return kInvalidScenario;
    }
    for (const auto& row : rows) {
      std::fprintf(f, "%.17g %.17g\n", row[0], row[static_cast<std::size_t>(indices[c])]);
    }
    std::fclose(f);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubesat + extensible hook system simulator"};
  app.require_subcommand(1);

  bool quiet = false;
  bool seedless = false;  // reserved; the simulator has no RNG
  app.add_flag("--quiet", quiet, "suppress human-readable output");
  app.add_flag("--seedless", seedless, "reserved (the simulation is deterministic, no RNG)");

  std::string scenario_path, out_dir = "out";
  Overrides overrides;
  auto* simulate = app.add_subcommand("simulate", "run a scenario file");
  simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "output directory (telemetry.csv, summary.json)");
  simulate->add_option("--dt", overrides.dt, "override sim.dt_s");
  simulate->add_option("--duration", overrides.duration, "override sim.duration_s");

  std::string suite_path;
  auto* validate = app.add_subcommand("validate", "run a validation suite");
  validate->add_option("suite", suite_path, "suite JSON file")->required();

  std::string telemetry_path, plot_out = ".";
  std::vector<std::string> channels;
  auto* plotdata = app.add_subcommand("plot-data", "export telemetry channels as series files");
  plotdata->add_option("telemetry", telemetry_path, "telemetry.csv from simulate")->required();
  plotdata->add_option("--channels", channels, "channel names (CSV headers)")->delimiter(',');
  plotdata->add_option("--out", plot_out, "output directory for .dat files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidScenario;
  }

  if (simulate->parsed()) return cmdSimulate(scenario_path, out_dir, overrides, quiet);
  if (validate->parsed()) return cmdValidate(suite_path, quiet);
  return cmdPlotData(telemetry_path, channels, plot_out);
}
