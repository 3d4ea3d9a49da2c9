#include "ehsim/control.hpp"

#include <cmath>

#include "ehsim/spatial.hpp"

namespace ehsim {

std::pair<double, PidState> pidStep(const PidState& state, const PidGains& gains, double error,
                                    double error_rate, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pidStep: dt must be positive");

  PidState next = state;
  const double candidate = std::clamp(next.integral + error * dt, -gains.integral_clamp,
                                      gains.integral_clamp);
  const double unclamped = gains.kp * error + gains.ki * candidate + gains.kd * error_rate;
  if (std::abs(unclamped) <= gains.output_clamp) {
    next.integral = candidate;
  }
  const double effort =
      std::clamp(gains.kp * error + gains.ki * next.integral + gains.kd * error_rate,
                 -gains.output_clamp, gains.output_clamp);
  next.prev_error = error;
  return {effort, next};
}

PidGains scheduledActuationGains(double y, const ScissorParams& p, const PidGains& base_gains,
                                 double jacobian_floor) {
  const double j = std::abs(extensionJacobian(std::min(y, p.actuationMax()), p));
  const double scale = 1.0 / std::max(j, jacobian_floor);
  PidGains g = base_gains;
  g.kp *= scale;
  g.kd *= scale;
  return g;
}

void PoseController::reset() {
  for (auto& s : position_) s = PidState{};
  for (auto& s : attitude_) s = PidState{};
}

Wrench PoseController::update(const RigidBodyState& state, const PoseReference& reference,
                              double dt) {
  Wrench cmd = Wrench::zero(Frame::Inertial);

  const Vec3 pos_err = reference.state.position - state.position;
  const Vec3 vel_err = reference.state.linear_velocity - state.linear_velocity;
  for (int i = 0; i < 3; ++i) {
    auto [effort, s] = pidStep(position_[i], gains_.position, pos_err[i], vel_err[i], dt);
    position_[i] = s;
    cmd.force[i] = effort + mass_ * reference.linear_accel[i];
  }

  // Rotation error as an axis-angle vector in the inertial frame.
  const Vec3 att_err = quatLog(reference.state.attitude * state.attitude.conjugate());
  const Vec3 rate_err = reference.state.attitude * reference.state.angular_velocity -
                        state.attitude * state.angular_velocity;
  const Vec3 torque_ff = state.attitude * (inertia_ * reference.angular_accel);
  for (int i = 0; i < 3; ++i) {
    auto [effort, s] = pidStep(attitude_[i], gains_.attitude, att_err[i], rate_err[i], dt);
    attitude_[i] = s;
    cmd.torque[i] = effort + torque_ff[i];
  }
  return cmd;
}

}  // namespace ehsim
