#pragma once

#include "ehsim/control.hpp"
#include "ehsim/scissor.hpp"
#include "ehsim/types.hpp"

namespace ehsim {

/// Rest-to-rest trapezoidal rate profile over a scalar distance: constant
/// acceleration for t_a, constant rate, constant deceleration for t_a.
struct TrapezoidProfile {
  double distance{0.0};
  double total_time{1.0};
  double accel_time{0.25};

  double plateauRate() const { return distance / (total_time - accel_time); }
  double accel() const { return plateauRate() / accel_time; }

  static TrapezoidProfile make(double distance, double total_time, double accel_time);
};

struct ProfilePoint {
  double position{0.0};
  double rate{0.0};
  double accel{0.0};
};

/// Evaluate the profile; t outside [0, T] clamps to the endpoints at rest.
ProfilePoint profileEval(const TrapezoidProfile& p, double t);

/// Straight-chord translation plus constant-axis slew, both driven by one
/// normalized trapezoid s(t) in [0, 1].
struct PoseTrajectory {
  Pose start;
  Pose goal;
  TrapezoidProfile profile;  // distance normalized to 1

  static PoseTrajectory make(const Pose& start, const Pose& goal, double total_time,
                             double accel_time);
};

PoseReference poseTrajectoryEval(const PoseTrajectory& traj, double t);

struct JointReference {
  EhsJointState joints;  // positions and rates filled in
  Vec3 accels{Vec3::Zero()};  // (pan, pitch, actuation)
};

struct JointTrajectory {
  EhsJointState start;
  EhsJointState goal;
  TrapezoidProfile profile;  // normalized

  static JointTrajectory make(const EhsJointState& start, const EhsJointState& goal,
                              double total_time, double accel_time);
};

JointReference jointTrajectoryEval(const JointTrajectory& traj, double t);

}  // namespace ehsim
