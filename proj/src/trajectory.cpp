#include "ehsim/trajectory.hpp"

#include <cmath>

#include "ehsim/spatial.hpp"

namespace ehsim {

namespace {

TrapezoidProfile make_checked(double d, double total, double accel) {
  if (!(d >= 0.0)) throw std::invalid_argument("TrapezoidProfile: distance must be >= 0");
  if (!(accel > 0.0) || !(accel < 0.5 * total)) {
    throw std::invalid_argument("TrapezoidProfile: need 0 < t_accel < T/2");
  }
  return TrapezoidProfile{d, total, accel};
}

}  // namespace

TrapezoidProfile TrapezoidProfile::make(double distance, double total_time, double accel_time) {
  return make_checked(distance, total_time, accel_time);
}

ProfilePoint profileEval(const TrapezoidProfile& p, double t) {
  if (p.distance == 0.0) return {0.0, 0.0, 0.0};
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= p.total_time) return {p.distance, 0.0, 0.0};

  const double v = p.plateauRate();
  const double a = p.accel();
  const double ta = p.accel_time;
  const double td = p.total_time - ta;  // deceleration onset
  if (t < ta) {
    return {0.5 * a * t * t, a * t, a};
  }
  if (t < td) {
    return {0.5 * v * ta + v * (t - ta), v, 0.0};
  }
  const double r = p.total_time - t;  // time remaining, mirror of the ramp-up
  return {p.distance - 0.5 * a * r * r, a * r, -a};
}

PoseTrajectory PoseTrajectory::make(const Pose& start, const Pose& goal, double total_time,
                                    double accel_time) {
  return PoseTrajectory{start, goal, make_checked(1.0, total_time, accel_time)};
}

PoseReference poseTrajectoryEval(const PoseTrajectory& traj, double t) {
  const ProfilePoint s = profileEval(traj.profile, t);
  const Vec3 chord = traj.goal.position - traj.start.position;
  // Constant-axis slew: axis expressed in the start body frame.
  const Vec3 slew = quatLog(traj.start.orientation.conjugate() * traj.goal.orientation);

  PoseReference ref;
  ref.state.position = traj.start.position + s.position * chord;
  ref.state.linear_velocity = s.rate * chord;
  ref.linear_accel = s.accel * chord;
  ref.state.attitude = (traj.start.orientation * quatExp(s.position * slew)).normalized();
  ref.state.angular_velocity = s.rate * slew;  // body frame, axis is body-fixed
  ref.angular_accel = s.accel * slew;
  return ref;
}

JointTrajectory JointTrajectory::make(const EhsJointState& start, const EhsJointState& goal,
                                      double total_time, double accel_time) {
  return JointTrajectory{start, goal, make_checked(1.0, total_time, accel_time)};
}

JointReference jointTrajectoryEval(const JointTrajectory& traj, double t) {
  const ProfilePoint s = profileEval(traj.profile, t);
  const Vec3 delta(traj.goal.pan_rad - traj.start.pan_rad,
                   traj.goal.pitch_rad - traj.start.pitch_rad,
                   traj.goal.actuation_m - traj.start.actuation_m);
  JointReference ref;
  ref.joints.pan_rad = traj.start.pan_rad + s.position * delta.x();
  ref.joints.pitch_rad = traj.start.pitch_rad + s.position * delta.y();
  ref.joints.actuation_m = traj.start.actuation_m + s.position * delta.z();
  ref.joints.pan_rate = s.rate * delta.x();
  ref.joints.pitch_rate = s.rate * delta.y();
  ref.joints.actuation_rate = s.rate * delta.z();
  ref.accels = s.accel * delta;
  return ref;
}

}  // namespace ehsim
