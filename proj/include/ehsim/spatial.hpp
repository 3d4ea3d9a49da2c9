#pragma once

#include <stdexcept>

#include "ehsim/types.hpp"

namespace ehsim {

/// Raised when a state goes non-finite during integration.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Euler convention used throughout: intrinsic X-Y-Z (roll alpha about X,
// then pitch beta about the new Y, then yaw gamma about the new Z).
Quat eulerToRotation(double alpha, double beta, double gamma);

/// Inverse of eulerToRotation. Ill-conditioned near |beta| = pi/2.
Vec3 rotationToEuler(const Quat& q);

/// Incremental rotation exp(phi), phi an axis-angle vector.
Quat quatExp(const Vec3& phi);

/// Axis-angle vector of q, shortest representation.
Vec3 quatLog(const Quat& q);

/// One fixed step of semi-implicit (symplectic) Euler for a single rigid
/// body: velocities advance first under Newton-Euler accelerations
/// (including the gyroscopic term), then the pose advances with the new
/// velocities. Attitude is renormalized.
RigidBodyState integrateStep(const RigidBodyState& state, double mass, const Mat3& inertia,
                             const Wrench& wrench, double dt);

}  // namespace ehsim
