#include "ehsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ehsim/spatial.hpp"

namespace ehsim {

namespace {

using nlohmann::json;

void checkKeys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ScenarioError("unknown key '" + it.key() + "' in '" + where + "'");
    }
  }
}

double num(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ScenarioError("missing key '" + key + "' in '" + where + "'");
  if (!obj.at(key).is_number()) {
    throw ScenarioError("key '" + key + "' in '" + where + "' must be a number");
  }
  return obj.at(key).get<double>();
}

double numOr(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? num(obj, key, where) : fallback;
}

Vec3 vec3(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ScenarioError("key '" + key + "' in '" + where + "' must be a 3-element array");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

PidGains parseGains(const json& obj, const std::string& where) {
  checkKeys(obj, {"kp", "ki", "kd", "integral_clamp", "output_clamp", "scheduled"}, where);
  PidGains g;
  g.kp = num(obj, "kp", where);
  g.ki = numOr(obj, "ki", 0.0, where);
  g.kd = numOr(obj, "kd", 0.0, where);
  g.integral_clamp = numOr(obj, "integral_clamp", 1.0, where);
  g.output_clamp = numOr(obj, "output_clamp", 1e9, where);
  if (g.kp < 0 || g.ki < 0 || g.kd < 0 || g.integral_clamp <= 0 || g.output_clamp <= 0) {
    throw ScenarioError("invalid gain values in '" + where + "'");
  }
  return g;
}

ProfileSpec parseProfile(const json& obj, const std::string& where) {
  checkKeys(obj, {"t_total_s", "t_accel_s"}, where);
  ProfileSpec p;
  p.t_total_s = num(obj, "t_total_s", where);
  p.t_accel_s = num(obj, "t_accel_s", where);
  if (!(p.t_accel_s > 0.0) || !(p.t_accel_s < 0.5 * p.t_total_s)) {
    throw ScenarioError("'" + where + "': need 0 < t_accel_s < t_total_s / 2");
  }
  return p;
}

}  // namespace

ScissorParams Scenario::scissorParams() const {
  return calibrateFromEnvelope(ehs_max_extension_m, ehs_link_count, ehs_mount_clearance_m);
}

EhsMassModel Scenario::massModel() const {
  EhsMassModel m = EhsMassModel::fromSplit(ehs_mass_kg, ehs_link_count / 2, ehs_mass_split.x(),
                                           ehs_mass_split.y(), ehs_mass_split.z());
  m.prismatic_friction_nspm = prismatic_friction_nspm;
  m.revolute_friction_nms = revolute_friction_nms;
  return m;
}

VehicleConfig Scenario::vehicleConfig() const {
  VehicleConfig cfg;
  cfg.dry_mass_kg = vehicle_mass_kg;
  cfg.dims_m = vehicle_dims_m;
  cfg.body_inertia = deriveBoxInertia(vehicle_mass_kg, vehicle_dims_m);
  cfg.mounts = mounts;
  cfg.limits = limits;
  return cfg;
}

double Scenario::actuationForDeployment(double extension_m) const {
  const ScissorParams p = scissorParams();
  const double x = std::clamp(p.foldedExtension() + extension_m, p.foldedExtension(),
                              p.maxExtension());
  return std::clamp(actuationFromExtension(x, p), p.actuationMin(), p.actuationMax());
}

Scenario parseScenario(const std::string& json_text, const std::string& name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  checkKeys(root, {"vehicle", "ehs", "mounts", "limits", "gains", "control", "initial",
                   "maneuver", "sim"},
            name);

  Scenario s;
  s.name = name;

  if (root.contains("vehicle")) {
    const auto& v = root["vehicle"];
    checkKeys(v, {"mass_kg", "dims_m"}, "vehicle");
    s.vehicle_mass_kg = numOr(v, "mass_kg", s.vehicle_mass_kg, "vehicle");
    if (v.contains("dims_m")) s.vehicle_dims_m = vec3(v, "dims_m", "vehicle");
    if (!(s.vehicle_mass_kg > 0.0)) throw ScenarioError("vehicle.mass_kg must be positive");
  }

  if (root.contains("ehs")) {
    const auto& e = root["ehs"];
    checkKeys(e,
              {"max_extension_m", "link_count", "mass_kg", "mount_clearance_m", "mass_split",
               "prismatic_friction_nspm", "revolute_friction_nms"},
              "ehs");
    s.ehs_max_extension_m = numOr(e, "max_extension_m", s.ehs_max_extension_m, "ehs");
    if (e.contains("link_count")) s.ehs_link_count = e.at("link_count").get<int>();
    s.ehs_mass_kg = numOr(e, "mass_kg", s.ehs_mass_kg, "ehs");
    s.ehs_mount_clearance_m = numOr(e, "mount_clearance_m", s.ehs_mount_clearance_m, "ehs");
    if (e.contains("mass_split")) s.ehs_mass_split = vec3(e, "mass_split", "ehs");
    s.prismatic_friction_nspm =
        numOr(e, "prismatic_friction_nspm", s.prismatic_friction_nspm, "ehs");
    s.revolute_friction_nms = numOr(e, "revolute_friction_nms", s.revolute_friction_nms, "ehs");
  }

  if (root.contains("mounts")) {
    if (!root["mounts"].is_array() || root["mounts"].empty()) {
      throw ScenarioError("'mounts' must be a non-empty array");
    }
    for (const auto& m : root["mounts"]) {
      checkKeys(m, {"position_m", "rpy_rad"}, "mounts[]");
      MountFrame mf;
      if (m.contains("position_m")) mf.position = vec3(m, "position_m", "mounts[]");
      if (m.contains("rpy_rad")) {
        const Vec3 rpy = vec3(m, "rpy_rad", "mounts[]");
        mf.orientation = eulerToRotation(rpy.x(), rpy.y(), rpy.z());
      }
      s.mounts.push_back(mf);
    }
    if (s.mounts.size() != 1) {
      throw ScenarioError("exactly one EHS mount is supported");
    }
  } else {
    s.mounts.push_back(MountFrame{});
  }

  if (root.contains("limits")) {
    const auto& l = root["limits"];
    checkKeys(l, {"body_force_n", "body_torque_nm", "prismatic_force_n", "revolute_torque_nm",
                  "link_force_n"},
              "limits");
    s.limits.max_body_force_per_axis_n =
        numOr(l, "body_force_n", s.limits.max_body_force_per_axis_n, "limits");
    s.limits.max_body_torque_per_axis_nm =
        numOr(l, "body_torque_nm", s.limits.max_body_torque_per_axis_nm, "limits");
    s.limits.max_prismatic_force_n =
        numOr(l, "prismatic_force_n", s.limits.max_prismatic_force_n, "limits");
    s.limits.max_revolute_torque_nm =
        numOr(l, "revolute_torque_nm", s.limits.max_revolute_torque_nm, "limits");
    s.link_force_limit_n = numOr(l, "link_force_n", s.link_force_limit_n, "limits");
  }

  if (!root.contains("gains")) throw ScenarioError("missing 'gains' section");
  {
    const auto& g = root["gains"];
    checkKeys(g, {"position", "attitude", "pan", "pitch", "actuation"}, "gains");
    s.base_gains.position = parseGains(g.at("position"), "gains.position");
    s.base_gains.attitude = parseGains(g.at("attitude"), "gains.attitude");
    s.pan_gains = parseGains(g.at("pan"), "gains.pan");
    s.pitch_gains = parseGains(g.at("pitch"), "gains.pitch");
    s.actuation_gains = parseGains(g.at("actuation"), "gains.actuation");
    if (g.at("actuation").contains("scheduled")) {
      s.actuation_scheduled = g.at("actuation").at("scheduled").get<bool>();
    }
  }

  if (root.contains("control")) {
    const auto& c = root["control"];
    checkKeys(c, {"base_enabled"}, "control");
    if (c.contains("base_enabled")) s.base_control_enabled = c.at("base_enabled").get<bool>();
  }

  if (root.contains("initial")) {
    const auto& i = root["initial"];
    checkKeys(i, {"position_m", "rpy_rad", "pan_rad", "pitch_rad", "extension_m"}, "initial");
    if (i.contains("position_m")) s.initial_position_m = vec3(i, "position_m", "initial");
    if (i.contains("rpy_rad")) s.initial_rpy_rad = vec3(i, "rpy_rad", "initial");
    s.initial_pan_rad = numOr(i, "pan_rad", 0.0, "initial");
    s.initial_pitch_rad = numOr(i, "pitch_rad", 0.0, "initial");
    s.initial_extension_m = numOr(i, "extension_m", 0.0, "initial");
  }

  if (root.contains("maneuver")) {
    const auto& m = root["maneuver"];
    checkKeys(m, {"pose_goal", "profile", "joint_goal", "joint_profile"}, "maneuver");
    if (m.contains("pose_goal")) {
      const auto& p = m.at("pose_goal");
      checkKeys(p, {"position_m", "rpy_rad"}, "maneuver.pose_goal");
      PoseGoalSpec goal;
      goal.position_m = vec3(p, "position_m", "maneuver.pose_goal");
      if (p.contains("rpy_rad")) goal.rpy_rad = vec3(p, "rpy_rad", "maneuver.pose_goal");
      if (!m.contains("profile")) {
        throw ScenarioError("maneuver.pose_goal requires maneuver.profile");
      }
      goal.profile = parseProfile(m.at("profile"), "maneuver.profile");
      s.pose_goal = goal;
    } else if (m.contains("profile")) {
      throw ScenarioError("maneuver.profile given without maneuver.pose_goal");
    }
    if (m.contains("joint_goal")) {
      const auto& jg = m.at("joint_goal");
      checkKeys(jg, {"pan_deg", "pan_rad", "pitch_deg", "pitch_rad", "extension_m"},
                "maneuver.joint_goal");
      JointGoalSpec goal;
      if (jg.contains("pan_deg") && jg.contains("pan_rad")) {
        throw ScenarioError("maneuver.joint_goal: give pan_deg or pan_rad, not both");
      }
      goal.pan_rad = jg.contains("pan_deg") ? num(jg, "pan_deg", "joint_goal") * M_PI / 180.0
                                            : numOr(jg, "pan_rad", 0.0, "joint_goal");
      goal.pitch_rad = jg.contains("pitch_deg") ? num(jg, "pitch_deg", "joint_goal") * M_PI / 180.0
                                                : numOr(jg, "pitch_rad", 0.0, "joint_goal");
      goal.extension_m = numOr(jg, "extension_m", 0.0, "joint_goal");
      if (!m.contains("joint_profile")) {
        throw ScenarioError("maneuver.joint_goal requires maneuver.joint_profile");
      }
      goal.profile = parseProfile(m.at("joint_profile"), "maneuver.joint_profile");
      s.joint_goal = goal;
    } else if (m.contains("joint_profile")) {
      throw ScenarioError("maneuver.joint_profile given without maneuver.joint_goal");
    }
  }

  if (!root.contains("sim")) throw ScenarioError("missing 'sim' section");
  {
    const auto& sim = root["sim"];
    checkKeys(sim, {"dt_s", "duration_s", "sample_interval_s"}, "sim");
    s.dt_s = numOr(sim, "dt_s", s.dt_s, "sim");
    s.duration_s = num(sim, "duration_s", "sim");
    s.sample_interval_s = numOr(sim, "sample_interval_s", s.sample_interval_s, "sim");
  }
  if (!(s.dt_s > 0.0)) throw ScenarioError("sim.dt_s must be positive");
  if (!(s.duration_s > 0.0)) throw ScenarioError("sim.duration_s must be positive");
  if (!(s.sample_interval_s >= s.dt_s)) {
    throw ScenarioError("sim.sample_interval_s must be >= sim.dt_s");
  }
  if (s.pose_goal && s.duration_s < s.pose_goal->profile.t_total_s) {
    throw ScenarioError("sim.duration_s is shorter than maneuver.profile.t_total_s");
  }
  if (s.joint_goal && s.duration_s < s.joint_goal->profile.t_total_s) {
    throw ScenarioError("sim.duration_s is shorter than maneuver.joint_profile.t_total_s");
  }

  // Exercise the derived geometry so infeasible configs fail up front.
  s.scissorParams();
  s.massModel();
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
    name = name.substr(0, name.size() - 5);
  }
  return parseScenario(buf.str(), name);
}

}  // namespace ehsim
