#pragma once

#include <cstdint>
#include <vector>

#include "ehsim/ehs_dynamics.hpp"
#include "ehsim/scissor.hpp"
#include "ehsim/types.hpp"

namespace ehsim {

struct ActuatorLimits {
  double max_body_force_per_axis_n{0.1};
  double max_body_torque_per_axis_nm{0.2};
  double max_prismatic_force_n{40.0};
  double max_revolute_torque_nm{0.2};
};

struct VehicleConfig {
  double dry_mass_kg{27.7};
  Vec3 dims_m{0.2463, 0.2463, 0.454};
  Mat3 body_inertia;  // about the base CoM, body frame
  std::vector<MountFrame> mounts;
  ActuatorLimits limits;
};

/// Thruster wrench (inertial frame, acting at the combined CoM) plus the
/// three EHS joint efforts.
struct ControlCommand {
  Wrench body{Vec3::Zero(), Vec3::Zero(), Frame::Inertial};
  double pan_torque_nm{0.0};
  double pitch_torque_nm{0.0};
  double actuation_force_n{0.0};
};

// Per-channel saturation flags, one bit each.
enum SaturationFlag : std::uint32_t {
  kSatForceX = 1u << 0,
  kSatForceY = 1u << 1,
  kSatForceZ = 1u << 2,
  kSatTorqueX = 1u << 3,
  kSatTorqueY = 1u << 4,
  kSatTorqueZ = 1u << 5,
  kSatPan = 1u << 6,
  kSatPitch = 1u << 7,
  kSatActuation = 1u << 8,
};

struct SaturatedCommand {
  ControlCommand command;
  std::uint32_t flags{0};
};

/// Clamp every scalar channel independently to its limit.
SaturatedCommand applySaturation(const ControlCommand& cmd, const ActuatorLimits& limits);

/// Uniform-density box inertia about its CoM.
Mat3 deriveBoxInertia(double mass_kg, const Vec3& dims_m);

/// Full state of the coupled free-floating system. Linear and angular
/// momentum are the translational/rotational state variables; external
/// wrenches are the only thing that changes them, so a zero-command system
/// conserves momentum to roundoff. Base pose/velocities are derived.
struct CoupledState {
  Vec3 com{Vec3::Zero()};              // system CoM, inertial
  Quat attitude{Quat::Identity()};     // base body attitude
  Vec3 linear_momentum{Vec3::Zero()};  // N s, inertial
  Vec3 angular_momentum{Vec3::Zero()}; // N m s, inertial, about the system CoM
  EhsJointState joints;

  RigidBodyState base;  // derived, kept in sync by step()
  std::uint32_t joint_limit_hits{0};  // bitmask, cleared each step
};

/// Cubesat + one EHS. Owns the configuration; stepping is deterministic.
class FreeFloatingSystem {
 public:
  FreeFloatingSystem(VehicleConfig vehicle, ScissorParams scissor, EhsMassModel mass_model);

  double totalMass() const { return total_mass_; }
  const VehicleConfig& vehicle() const { return vehicle_; }
  const ScissorParams& scissor() const { return scissor_; }
  const EhsMassModel& massModel() const { return mass_model_; }
  const MountFrame& mount() const { return vehicle_.mounts.front(); }

  /// Build a consistent coupled state from a desired base state and joints.
  CoupledState makeState(const RigidBodyState& base, const EhsJointState& joints) const;

  /// One semi-implicit step under a saturated command: joints advance under
  /// efforts minus viscous friction, momentum advances under the body
  /// wrench, base velocities are re-solved from the momentum balance.
  CoupledState step(const CoupledState& state, const ControlCommand& cmd, double dt) const;

  /// Total momentum reconstructed from the kinematic state (base velocities
  /// plus the lumped-mass chain); independent of the stored momentum.
  std::pair<Vec3, Vec3> measuredMomentum(const CoupledState& state) const;

  /// System CoM recomputed from the kinematic state.
  Vec3 measuredCom(const CoupledState& state) const;

  /// Composite inertia about the system CoM for the current joints.
  Mat3 currentInertia(const CoupledState& state) const;

 private:
  void deriveBase(CoupledState& state) const;

  VehicleConfig vehicle_;
  ScissorParams scissor_;
  EhsMassModel mass_model_;
  double total_mass_;
};

}  // namespace ehsim
