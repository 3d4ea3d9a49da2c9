#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ehsim/control.hpp"
#include "ehsim/vehicle.hpp"

namespace ehsim {

/// Configuration errors: unknown keys, missing keys, invalid values.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProfileSpec {
  double t_total_s{0.0};
  double t_accel_s{0.0};
};

struct PoseGoalSpec {
  Vec3 position_m{Vec3::Zero()};
  Vec3 rpy_rad{Vec3::Zero()};  // intrinsic X-Y-Z
  ProfileSpec profile;
};

struct JointGoalSpec {
  double pan_rad{0.0};
  double pitch_rad{0.0};
  double extension_m{0.0};  // measured from the fully folded datum L_E + L_B
  ProfileSpec profile;
};

struct Scenario {
  std::string name;

  // vehicle.*
  double vehicle_mass_kg{27.7};
  Vec3 vehicle_dims_m{0.2463, 0.2463, 0.454};

  // ehs.*
  double ehs_max_extension_m{5.026};
  int ehs_link_count{24};
  double ehs_mass_kg{2.41};
  double ehs_mount_clearance_m{0.100};
  Vec3 ehs_mass_split{0.85, 0.10, 0.05};  // links, actuation bar, effector
  double prismatic_friction_nspm{0.01};
  double revolute_friction_nms{0.01};

  // mounts[]
  std::vector<MountFrame> mounts;

  // limits.*
  ActuatorLimits limits;
  double link_force_limit_n{20.0};  // structural, reported only

  // gains.*
  PoseControllerGains base_gains;
  PidGains pan_gains, pitch_gains, actuation_gains;
  bool actuation_scheduled{true};

  // control.*
  bool base_control_enabled{true};

  // initial.*
  Vec3 initial_position_m{Vec3::Zero()};
  Vec3 initial_rpy_rad{Vec3::Zero()};
  double initial_pan_rad{0.0};
  double initial_pitch_rad{0.0};
  double initial_extension_m{0.0};  // from the folded datum

  // maneuver.*
  std::optional<PoseGoalSpec> pose_goal;
  std::optional<JointGoalSpec> joint_goal;

  // sim.*
  double dt_s{1e-3};
  double duration_s{0.0};
  double sample_interval_s{0.1};

  ScissorParams scissorParams() const;
  EhsMassModel massModel() const;
  VehicleConfig vehicleConfig() const;

  /// Actuation coordinate for an extension above the folded datum, clamped
  /// to the joint hard stops.
  double actuationForDeployment(double extension_m) const;
};

/// Parse and validate; unknown keys are a hard error.
Scenario parseScenario(const std::string& json_text, const std::string& name);
Scenario loadScenario(const std::string& path);

}  // namespace ehsim
