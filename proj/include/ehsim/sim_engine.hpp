#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ehsim/scenario.hpp"

namespace ehsim {

inline constexpr int kTelemetryColumns = 42;

/// Column names, fixed order; the machine contract for telemetry.csv and
/// the plot-data channel names.
const std::array<const char*, kTelemetryColumns>& telemetryHeaders();

struct Telemetry {
  std::vector<std::array<double, kTelemetryColumns>> rows;
};

struct Event {
  double t_s{0.0};
  std::string what;
};

struct RunSummary {
  std::string scenario_name;
  double final_position_error_m{0.0};
  double final_attitude_error_rad{0.0};
  double final_pan_error_rad{0.0};
  double final_pitch_error_rad{0.0};
  double final_extension_error_m{0.0};
  Vec3 final_position_m{Vec3::Zero()};
  Vec3 final_rpy_rad{Vec3::Zero()};
  Vec3 max_abs_force_n{Vec3::Zero()};
  Vec3 max_abs_torque_nm{Vec3::Zero()};
  Vec3 impulse_unsigned_ns{Vec3::Zero()};
  Vec3 impulse_net_ns{Vec3::Zero()};
  double max_pan_torque_nm{0.0};
  double max_pitch_torque_nm{0.0};
  double max_actuation_force_n{0.0};
  std::vector<Event> events;

  /// Flattened numeric view used by compareSummary and the JSON form.
  std::map<std::string, double> fields() const;
};

struct RunResult {
  Telemetry telemetry;
  RunSummary summary;
  CoupledState final_state;
};

/// Per-axis impulse bookkeeping: unsigned accumulates |F| dt per axis, net
/// accumulates F dt.
struct ImpulseAccumulator {
  Vec3 unsigned_ns{Vec3::Zero()};
  Vec3 net_ns{Vec3::Zero()};

  void add(const Vec3& force, double dt) {
    unsigned_ns += force.cwiseAbs() * dt;
    net_ns += force * dt;
  }
};

/// Execute the control -> saturation -> step cycle at fixed dt.
RunResult run(const Scenario& scenario);

struct FieldTolerance {
  double abs_tol{0.0};
  double rel_tol{0.0};
};

struct CompareReport {
  bool pass{true};
  std::vector<std::string> violations;
};

/// Per-field comparison: a field passes if |a - b| <= abs_tol + rel_tol * |b|.
CompareReport compareSummary(const RunSummary& result, const std::map<std::string, double>& reference,
                             const std::map<std::string, FieldTolerance>& tolerances);

std::string summaryToJson(const RunSummary& summary);
std::map<std::string, double> summaryFieldsFromJson(const std::string& json_text);

void writeTelemetryCsv(const Telemetry& telemetry, const std::string& path);

}  // namespace ehsim
