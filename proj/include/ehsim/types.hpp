#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ehsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

enum class Frame { Inertial, Body };

/// Force/torque pair. The frame tag says which frame the components are
/// expressed in; it is set at construction and carried along.
struct Wrench {
  Vec3 force{Vec3::Zero()};
  Vec3 torque{Vec3::Zero()};
  Frame frame{Frame::Inertial};

  static Wrench zero(Frame f = Frame::Inertial) { return Wrench{Vec3::Zero(), Vec3::Zero(), f}; }
};

struct Pose {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};
};

/// Free body state. Angular velocity is expressed in the body frame,
/// everything else in the inertial frame.
struct RigidBodyState {
  Vec3 position{Vec3::Zero()};
  Quat attitude{Quat::Identity()};
  Vec3 linear_velocity{Vec3::Zero()};
  Vec3 angular_velocity{Vec3::Zero()};  // body frame, rad/s
};

inline bool allFinite(const Vec3& v) { return v.allFinite(); }

inline bool allFinite(const RigidBodyState& s) {
  return s.position.allFinite() && s.linear_velocity.allFinite() &&
         s.angular_velocity.allFinite() && s.attitude.coeffs().allFinite();
}

}  // namespace ehsim
