#pragma once

#include <utility>
#include <vector>

#include "ehsim/scissor.hpp"
#include "ehsim/types.hpp"

namespace ehsim {

/// Lumped-mass distribution of the boom. Link masses sit at the crossing
/// pivots on the boom axis (transverse offsets cancel by symmetry), the
/// actuation bar mass stays at the mount, the effector mass rides the tip.
struct EhsMassModel {
  double total_mass_kg{0.0};
  std::vector<double> link_masses_kg;  // one entry per crossing station
  double effector_mass_kg{0.0};
  double actuation_bar_mass_kg{0.0};
  double prismatic_friction_nspm{0.01};   // N s/m, on the actuation joint
  double revolute_friction_nms{0.01};     // N m s/rad, on pan and pitch

  /// Split the total across bar / links / effector by mass fractions.
  static EhsMassModel fromSplit(double total_kg, int pair_count, double link_fraction,
                                double bar_fraction, double effector_fraction);
};

/// Positions/velocities of every lumped mass in the cubesat body frame,
/// plus the per-joint effective inertias of the simplified joint model.
struct LumpedMasses {
  std::vector<double> masses;
  std::vector<Vec3> positions;   // body frame
  std::vector<Vec3> velocities;  // body frame, d/dt at fixed base
  double pan_inertia{0.0};       // kg m^2, about the pan axis
  double pitch_inertia{0.0};     // kg m^2
  double actuation_mass{0.0};    // kg, effective mass seen by the prismatic joint
};

/// Joint-state snapshot paired with the derived lumped-mass layout.
struct EhsDynamicState {
  EhsJointState joints;
  LumpedMasses masses;
};

/// The N+1 pivot stations along the boom axis (k * 2h for k = 0..N measured
/// from L_B), plus the effector station.
std::vector<double> linkStations(const EhsJointState& joints, const ScissorParams& p);

LumpedMasses lumpedMasses(const EhsJointState& joints, const ScissorParams& p,
                          const EhsMassModel& model, const MountFrame& mount);

EhsDynamicState makeEhsState(const EhsJointState& joints, const ScissorParams& p,
                             const EhsMassModel& model, const MountFrame& mount);

/// Linear momentum and angular momentum about the base CoM (base body
/// origin), both in the inertial frame, of the EHS lumped masses.
std::pair<Vec3, Vec3> ehsMomentum(const EhsDynamicState& state, const EhsMassModel& model,
                                  const RigidBodyState& base);

/// Wrench the base must supply so the EHS follows the given joint
/// accelerations: -d/dt of the EHS momentum, expressed in the body frame.
Wrench reactionWrench(const EhsDynamicState& state, const Vec3& joint_accels,
                      const ScissorParams& p, const EhsMassModel& model, const MountFrame& mount,
                      const RigidBodyState& base);

/// Inertia tensor of base body + lumped masses about the combined CoM,
/// body frame. Also returns the CoM offset in the body frame.
Mat3 compositeInertia(const LumpedMasses& lm, const Mat3& base_inertia, double base_mass,
                      Vec3* com_offset = nullptr);

}  // namespace ehsim
