#include "ehsim/spatial.hpp"

#include <cmath>

namespace ehsim {

Quat eulerToRotation(double alpha, double beta, double gamma) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw std::invalid_argument("eulerToRotation: non-finite angle");
  }
  return Quat(Eigen::AngleAxisd(alpha, Vec3::UnitX()) * Eigen::AngleAxisd(beta, Vec3::UnitY()) *
              Eigen::AngleAxisd(gamma, Vec3::UnitZ()));
}

Vec3 rotationToEuler(const Quat& q) {
  const Mat3 r = q.toRotationMatrix();
  // Intrinsic XYZ: R = Rx(a) Ry(b) Rz(c).
  const double beta = std::asin(std::clamp(r(0, 2), -1.0, 1.0));
  const double alpha = std::atan2(-r(1, 2), r(2, 2));
  const double gamma = std::atan2(-r(0, 1), r(0, 0));
  return Vec3(alpha, beta, gamma);
}

Quat quatExp(const Vec3& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
    return q;
  }
  return Quat(Eigen::AngleAxisd(angle, phi / angle));
}

Vec3 quatLog(const Quat& q) {
  Quat qn = q.normalized();
  if (qn.w() < 0.0) qn.coeffs() = -qn.coeffs();
  const Vec3 v = qn.vec();
  const double s = v.norm();
  if (s < 1e-12) return 2.0 * v;
  return (2.0 * std::atan2(s, qn.w()) / s) * v;
}

RigidBodyState integrateStep(const RigidBodyState& state, double mass, const Mat3& inertia,
                             const Wrench& wrench, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("integrateStep: dt must be positive");
  if (!allFinite(state) || !wrench.force.allFinite() || !wrench.torque.allFinite()) {
    throw SimulationFault("integrateStep: non-finite input");
  }

  const Mat3 rot = state.attitude.toRotationMatrix();
  const Vec3 force_inertial =
      wrench.frame == Frame::Inertial ? wrench.force : Vec3(rot * wrench.force);
  const Vec3 torque_body =
      wrench.frame == Frame::Body ? wrench.torque : Vec3(rot.transpose() * wrench.torque);

  RigidBodyState next = state;
  next.linear_velocity += dt / mass * force_inertial;

  const Vec3& w = state.angular_velocity;
  const Vec3 ang_accel = inertia.ldlt().solve(torque_body - w.cross(inertia * w));
  next.angular_velocity += dt * ang_accel;

  next.position += dt * next.linear_velocity;
  next.attitude = (state.attitude * quatExp(dt * next.angular_velocity)).normalized();

  if (!allFinite(next)) throw SimulationFault("integrateStep: state went non-finite");
  return next;
}

}  // namespace ehsim
