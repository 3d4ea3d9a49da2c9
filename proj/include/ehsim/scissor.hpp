#pragma once

#include <stdexcept>

#include "ehsim/types.hpp"

namespace ehsim {

/// Geometric constants of the scissor boom extension map
///   x(y) = L_E + L_B + (2N + 3) * sqrt(L_L^2 - y^2)
/// where y is the prismatic actuation coordinate on the actuation bar.
/// y = L_L is fully folded, y = 0 is fully extended.
struct ScissorParams {
  double half_link_m;       // L_L
  double base_offset_m;     // L_B
  double effector_offset_m; // L_E
  int pair_count;           // N, crossing link pairs

  double foldedExtension() const { return effector_offset_m + base_offset_m; }
  double maxExtension() const {
    return effector_offset_m + base_offset_m + (2 * pair_count + 3) * half_link_m;
  }
  // Hard stops keeping the Jacobian finite: the fold side (y -> L_L) is the
  // infinite-gain singularity, the extended side (y -> 0) is safe.
  double actuationMin() const { return 0.005 * half_link_m; }
  double actuationMax() const { return 0.995 * half_link_m; }
};

/// Joint coordinates of the 3-DoF chain: pan about the mount normal,
/// pitch reorienting the scissor structure, and the prismatic actuation y.
struct EhsJointState {
  double pan_rad{0.0};
  double pitch_rad{0.0};
  double actuation_m{0.0};
  double pan_rate{0.0};
  double pitch_rate{0.0};
  double actuation_rate{0.0};
};

/// Pose of the EHS base on the cubesat, in the body frame.
struct MountFrame {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};
};

/// Eq. x(y): end-effector distance along the boom axis. Domain y in [0, L_L].
double extensionFromActuation(double y, const ScissorParams& p);

/// Inverse map; domain x in [folded, max extension].
double actuationFromExtension(double x, const ScissorParams& p);

/// dx/dy. Always <= 0; singular at y = L_L.
double extensionJacobian(double y, const ScissorParams& p);

/// Solve link geometry from the deployed envelope: given the reachable
/// maximum extension, the number of individual links (2N) and the
/// base+effector clearance budget, return params with
/// extensionFromActuation(0) == max_extension exactly.
ScissorParams calibrateFromEnvelope(double max_extension_m, int link_count,
                                    double mount_clearance_m);

/// Chain: base pose * mount * Rz(pan) * Ry(pitch) * translate(extension, 0, 0).
Pose endEffectorPose(const EhsJointState& joints, const ScissorParams& p, const MountFrame& mount,
                     const RigidBodyState& base);

}  // namespace ehsim
