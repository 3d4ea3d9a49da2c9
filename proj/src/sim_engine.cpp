#include "ehsim/sim_engine.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ehsim/spatial.hpp"
#include "ehsim/trajectory.hpp"

namespace ehsim {

const std::array<const char*, kTelemetryColumns>& telemetryHeaders() {
  static const std::array<const char*, kTelemetryColumns> headers = {
      "t_s",
      "pos_x_m", "pos_y_m", "pos_z_m",
      "q_w", "q_x", "q_y", "q_z",
      "vel_x", "vel_y", "vel_z",
      "omg_x", "omg_y", "omg_z",
      "joint_pan_rad", "joint_pitch_rad", "joint_y_m",
      "joint_pan_rate", "joint_pitch_rate", "joint_y_rate",
      "cmd_fx", "cmd_fy", "cmd_fz", "cmd_tx", "cmd_ty", "cmd_tz",
      "app_fx", "app_fy", "app_fz", "app_tx", "app_ty", "app_tz",
      "eff_pan_nm", "eff_pitch_nm", "eff_y_n",
      "sat_flags",
      "imp_ux", "imp_uy", "imp_uz",
      "imp_nx", "imp_ny", "imp_nz"};
  return headers;
}

namespace {

/// Prismatic joint regulator working in extension space, so the scheduled
/// gains keep the loop behavior constant along the stroke.
class ActuationController {
 public:
  ActuationController(const ScissorParams& params, PidGains base_gains, bool scheduled)
      : params_(params), base_gains_(base_gains), scheduled_(scheduled) {}

  double update(double y, double y_rate, double y_ref, double y_ref_rate, double dt) {
    const double x = extensionFromActuation(y, params_);
    const double x_ref = extensionFromActuation(y_ref, params_);
    const double jac = extensionJacobian(std::min(y, params_.actuationMax()), params_);
    const double jac_ref = extensionJacobian(std::min(y_ref, params_.actuationMax()), params_);
    const PidGains gains =
        scheduled_ ? scheduledActuationGains(y, params_, base_gains_) : base_gains_;
    auto [effort, next] = pidStep(state_, gains, x_ref - x, jac_ref * y_ref_rate - jac * y_rate, dt);
    state_ = next;
    return -effort;  // dx/dy < 0: positive extension error needs negative y force
  }

 private:
  ScissorParams params_;
  PidGains base_gains_;
  bool scheduled_;
  PidState state_;
};

struct JointControllers {
  PidState pan, pitch;
  ActuationController actuation;
};

Pose basePose(const RigidBodyState& s) { return Pose{s.position, s.attitude}; }

PoseReference holdReference(const Pose& pose) {
  PoseReference ref;
  ref.state.position = pose.position;
  ref.state.attitude = pose.orientation;
  return ref;
}

}  // namespace

std::map<std::string, double> RunSummary::fields() const {
  std::map<std::string, double> f;
  f["final_position_error_m"] = final_position_error_m;
  f["final_attitude_error_rad"] = final_attitude_error_rad;
  f["final_pan_error_rad"] = final_pan_error_rad;
  f["final_pitch_error_rad"] = final_pitch_error_rad;
  f["final_extension_error_m"] = final_extension_error_m;
  const char axes[3] = {'x', 'y', 'z'};
  for (int i = 0; i < 3; ++i) {
    const std::string a(1, axes[i]);
    f["final_position_" + a + "_m"] = final_position_m[i];
    f["final_rpy_" + a + "_rad"] = final_rpy_rad[i];
    f["max_abs_force_" + a + "_n"] = max_abs_force_n[i];
    f["max_abs_torque_" + a + "_nm"] = max_abs_torque_nm[i];
    f["impulse_unsigned_" + a + "_ns"] = impulse_unsigned_ns[i];
    f["impulse_net_" + a + "_ns"] = impulse_net_ns[i];
  }
  f["max_pan_torque_nm"] = max_pan_torque_nm;
  f["max_pitch_torque_nm"] = max_pitch_torque_nm;
  f["max_actuation_force_n"] = max_actuation_force_n;
  return f;
}

RunResult run(const Scenario& scenario) {
  const ScissorParams params = scenario.scissorParams();
  const EhsMassModel mass_model = scenario.massModel();
  const FreeFloatingSystem system(scenario.vehicleConfig(), params, mass_model);

  RigidBodyState initial_base;
  initial_base.position = scenario.initial_position_m;
  initial_base.attitude = eulerToRotation(scenario.initial_rpy_rad.x(),
                                          scenario.initial_rpy_rad.y(),
                                          scenario.initial_rpy_rad.z());
  EhsJointState initial_joints;
  initial_joints.pan_rad = scenario.initial_pan_rad;
  initial_joints.pitch_rad = scenario.initial_pitch_rad;
  initial_joints.actuation_m = scenario.actuationForDeployment(scenario.initial_extension_m);

  CoupledState state = system.makeState(initial_base, initial_joints);

  // Reference generators.
  std::optional<PoseTrajectory> pose_traj;
  Pose pose_hold = basePose(initial_base);
  if (scenario.pose_goal) {
    Pose goal;
    goal.position = scenario.pose_goal->position_m;
    goal.orientation = eulerToRotation(scenario.pose_goal->rpy_rad.x(),
                                       scenario.pose_goal->rpy_rad.y(),
                                       scenario.pose_goal->rpy_rad.z());
    pose_traj = PoseTrajectory::make(basePose(initial_base), goal,
                                     scenario.pose_goal->profile.t_total_s,
                                     scenario.pose_goal->profile.t_accel_s);
    pose_hold = goal;
  }
  std::optional<JointTrajectory> joint_traj;
  EhsJointState joint_hold = initial_joints;
  if (scenario.joint_goal) {
    EhsJointState goal;
    goal.pan_rad = scenario.joint_goal->pan_rad;
    goal.pitch_rad = scenario.joint_goal->pitch_rad;
    goal.actuation_m = scenario.actuationForDeployment(scenario.joint_goal->extension_m);
    joint_traj = JointTrajectory::make(initial_joints, goal,
                                       scenario.joint_goal->profile.t_total_s,
                                       scenario.joint_goal->profile.t_accel_s);
    joint_hold = goal;
  }

  auto poseRefAt = [&](double t) -> PoseReference {
    if (pose_traj && t <= pose_traj->profile.total_time) return poseTrajectoryEval(*pose_traj, t);
    return holdReference(pose_hold);
  };
  auto jointRefAt = [&](double t) -> JointReference {
    if (joint_traj && t <= joint_traj->profile.total_time) {
      return jointTrajectoryEval(*joint_traj, t);
    }
    JointReference ref;
    ref.joints = joint_hold;
    ref.joints.pan_rate = ref.joints.pitch_rate = ref.joints.actuation_rate = 0.0;
    return ref;
  };

  PoseController base_controller(scenario.base_gains, system.totalMass(),
                                 system.currentInertia(state));
  JointControllers joints{
      PidState{}, PidState{},
      ActuationController(params, scenario.actuation_gains, scenario.actuation_scheduled)};

  const double dt = scenario.dt_s;
  const long long n_steps = std::llround(scenario.duration_s / dt);
  const long long sample_every = std::max<long long>(1, std::llround(scenario.sample_interval_s / dt));

  RunResult result;
  result.summary.scenario_name = scenario.name;
  result.telemetry.rows.reserve(static_cast<std::size_t>(n_steps / sample_every) + 2);
  ImpulseAccumulator impulse;
  std::uint32_t prev_flags = 0;
  bool link_force_exceeded = false;
  bool joint_limit_logged = false;

  auto makeCommand = [&](double t) -> ControlCommand {
    ControlCommand cmd;
    if (scenario.base_control_enabled) {
      base_controller.setInertia(system.currentInertia(state));
      cmd.body = base_controller.update(state.base, poseRefAt(t), dt);
    }
    const JointReference jref = jointRefAt(t);
    {
      auto [effort, s] = pidStep(joints.pan, scenario.pan_gains,
                                 jref.joints.pan_rad - state.joints.pan_rad,
                                 jref.joints.pan_rate - state.joints.pan_rate, dt);
      joints.pan = s;
      cmd.pan_torque_nm = effort;
    }
    {
      auto [effort, s] = pidStep(joints.pitch, scenario.pitch_gains,
                                 jref.joints.pitch_rad - state.joints.pitch_rad,
                                 jref.joints.pitch_rate - state.joints.pitch_rate, dt);
      joints.pitch = s;
      cmd.pitch_torque_nm = effort;
    }
    cmd.actuation_force_n =
        joints.actuation.update(state.joints.actuation_m, state.joints.actuation_rate,
                                jref.joints.actuation_m, jref.joints.actuation_rate, dt);
    return cmd;
  };

  auto record = [&](double t, const ControlCommand& cmd, const SaturatedCommand& sat) {
    std::array<double, kTelemetryColumns> row{};
    int c = 0;
    row[c++] = t;
    for (int i = 0; i < 3; ++i) row[c++] = state.base.position[i];
    row[c++] = state.base.attitude.w();
    row[c++] = state.base.attitude.x();
    row[c++] = state.base.attitude.y();
    row[c++] = state.base.attitude.z();
    for (int i = 0; i < 3; ++i) row[c++] = state.base.linear_velocity[i];
    for (int i = 0; i < 3; ++i) row[c++] = state.base.angular_velocity[i];
    row[c++] = state.joints.pan_rad;
    row[c++] = state.joints.pitch_rad;
    row[c++] = state.joints.actuation_m;
    row[c++] = state.joints.pan_rate;
    row[c++] = state.joints.pitch_rate;
    row[c++] = state.joints.actuation_rate;
    for (int i = 0; i < 3; ++i) row[c++] = cmd.body.force[i];
    for (int i = 0; i < 3; ++i) row[c++] = cmd.body.torque[i];
    for (int i = 0; i < 3; ++i) row[c++] = sat.command.body.force[i];
    for (int i = 0; i < 3; ++i) row[c++] = sat.command.body.torque[i];
    row[c++] = sat.command.pan_torque_nm;
    row[c++] = sat.command.pitch_torque_nm;
    row[c++] = sat.command.actuation_force_n;
    row[c++] = static_cast<double>(sat.flags);
    for (int i = 0; i < 3; ++i) row[c++] = impulse.unsigned_ns[i];
    for (int i = 0; i < 3; ++i) row[c++] = impulse.net_ns[i];
    result.telemetry.rows.push_back(row);
  };

  for (long long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ControlCommand cmd = makeCommand(t);
    const SaturatedCommand sat = applySaturation(cmd, scenario.vehicleConfig().limits);

    if (k % sample_every == 0) record(t, cmd, sat);

    if (const std::uint32_t onset = sat.flags & ~prev_flags) {
      result.summary.events.push_back({t, "actuator saturation onset, flags=" + std::to_string(onset)});
    }
    prev_flags = sat.flags;
    if (!link_force_exceeded &&
        std::abs(sat.command.actuation_force_n) > scenario.link_force_limit_n) {
      link_force_exceeded = true;
      result.summary.events.push_back({t, "actuation force exceeds structural link limit"});
    }

    impulse.add(sat.command.body.force, dt);
    result.summary.max_abs_force_n =
        result.summary.max_abs_force_n.cwiseMax(sat.command.body.force.cwiseAbs());
    result.summary.max_abs_torque_nm =
        result.summary.max_abs_torque_nm.cwiseMax(sat.command.body.torque.cwiseAbs());
    result.summary.max_pan_torque_nm =
        std::max(result.summary.max_pan_torque_nm, std::abs(sat.command.pan_torque_nm));
    result.summary.max_pitch_torque_nm =
        std::max(result.summary.max_pitch_torque_nm, std::abs(sat.command.pitch_torque_nm));
    result.summary.max_actuation_force_n =
        std::max(result.summary.max_actuation_force_n, std::abs(sat.command.actuation_force_n));

    try {
      state = system.step(state, sat.command, dt);
    } catch (const SimulationFault& e) {
      throw SimulationFault("numerical fault at t=" + std::to_string(t) + " s: " + e.what());
    }
    if (state.joint_limit_hits && !joint_limit_logged) {
      joint_limit_logged = true;
      result.summary.events.push_back({t + dt, "joint limit hit"});
    }
  }

  {
    const double t_end = static_cast<double>(n_steps) * dt;
    const ControlCommand cmd = makeCommand(t_end);
    const SaturatedCommand sat = applySaturation(cmd, scenario.vehicleConfig().limits);
    record(t_end, cmd, sat);
  }

  // Terminal errors against the maneuver goals (or the initial pose when no
  // pose maneuver is defined).
  const Pose pose_goal = pose_hold;
  result.summary.final_position_m = state.base.position;
  result.summary.final_rpy_rad = rotationToEuler(state.base.attitude);
  result.summary.final_position_error_m = (state.base.position - pose_goal.position).norm();
  result.summary.final_attitude_error_rad =
      quatLog(pose_goal.orientation * state.base.attitude.conjugate()).norm();
  result.summary.final_pan_error_rad = joint_hold.pan_rad - state.joints.pan_rad;
  result.summary.final_pitch_error_rad = joint_hold.pitch_rad - state.joints.pitch_rad;
  result.summary.final_extension_error_m =
      extensionFromActuation(joint_hold.actuation_m, params) -
      extensionFromActuation(state.joints.actuation_m, params);
  result.summary.impulse_unsigned_ns = impulse.unsigned_ns;
  result.summary.impulse_net_ns = impulse.net_ns;
  result.final_state = state;
  return result;
}

CompareReport compareSummary(const RunSummary& result, const std::map<std::string, double>& reference,
                             const std::map<std::string, FieldTolerance>& tolerances) {
  CompareReport report;
  const auto actual = result.fields();
  for (const auto& [field, tol] : tolerances) {
    const auto ref_it = reference.find(field);
    if (ref_it == reference.end()) {
      report.pass = false;
      report.violations.push_back(field + ": missing from reference");
      continue;
    }
    const auto act_it = actual.find(field);
    if (act_it == actual.end()) {
      report.pass = false;
      report.violations.push_back(field + ": unknown summary field");
      continue;
    }
    const double allowed = tol.abs_tol + tol.rel_tol * std::abs(ref_it->second);
    const double err = std::abs(act_it->second - ref_it->second);
    if (!(err <= allowed)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.9g, expected %.9g (|err| %.3g > %.3g)",
                    field.c_str(), act_it->second, ref_it->second, err, allowed);
      report.pass = false;
      report.violations.push_back(buf);
    }
  }
  return report;
}

std::string summaryToJson(const RunSummary& summary) {
  nlohmann::json j;
  j["scenario_name"] = summary.scenario_name;
  nlohmann::json fields = nlohmann::json::object();
  for (const auto& [k, v] : summary.fields()) fields[k] = v;
  j["fields"] = fields;
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : summary.events) events.push_back({{"t_s", e.t_s}, {"what", e.what}});
  j["events"] = events;
  return j.dump(2) + "\n";
}

std::map<std::string, double> summaryFieldsFromJson(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  const auto& fields = j.contains("fields") ? j.at("fields") : j;
  std::map<std::string, double> out;
  for (auto it = fields.begin(); it != fields.end(); ++it) {
    if (it.value().is_number()) out[it.key()] = it.value().get<double>();
  }
  return out;
}

void writeTelemetryCsv(const Telemetry& telemetry, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const auto& headers = telemetryHeaders();
  for (int i = 0; i < kTelemetryColumns; ++i) {
    std::fputs(headers[i], f);
    std::fputc(i + 1 == kTelemetryColumns ? '\n' : ',', f);
  }
  for (const auto& row : telemetry.rows) {
    for (int i = 0; i < kTelemetryColumns; ++i) {
      std::fprintf(f, "%.17g%c", row[i], i + 1 == kTelemetryColumns ? '\n' : ',');
    }
  }
  std::fclose(f);
}

}  // namespace ehsim
