#pragma once

#include <utility>

#include "ehsim/scissor.hpp"
#include "ehsim/types.hpp"

namespace ehsim {

struct PidGains {
  double kp{0.0};
  double ki{0.0};
  double kd{0.0};
  double integral_clamp{1.0};
  double output_clamp{1.0};
};

struct PidState {
  double integral{0.0};
  double prev_error{0.0};
};

/// One PID update. The derivative term uses the supplied measured rate, not
/// numerical differentiation of the error. Conditional anti-windup: the
/// integral is frozen while the output is saturated.
std::pair<double, PidState> pidStep(const PidState& state, const PidGains& gains, double error,
                                    double error_rate, double dt);

/// Gain scheduling for the nonlinear prismatic joint: kp and kd are scaled
/// by 1/max(|dx/dy|, floor) so the loop gain seen in extension space stays
/// roughly constant along the stroke.
PidGains scheduledActuationGains(double y, const ScissorParams& p, const PidGains& base_gains,
                                 double jacobian_floor = 0.5);

/// Reference pose plus feedforward accelerations, as produced by the
/// trajectory generator.
struct PoseReference {
  RigidBodyState state;
  Vec3 linear_accel{Vec3::Zero()};   // inertial
  Vec3 angular_accel{Vec3::Zero()};  // body frame
};

struct PoseControllerGains {
  PidGains position;  // shared across the three axes
  PidGains attitude;
};

/// Full-state PID pose regulator: per-axis position PID with velocity error
/// as rate plus mass feedforward; attitude PID on the axis-angle rotation
/// error with angular-velocity error as rate plus inertia feedforward.
class PoseController {
 public:
  PoseController(PoseControllerGains gains, double mass_kg, Mat3 inertia_body)
      : gains_(std::move(gains)), mass_(mass_kg), inertia_(std::move(inertia_body)) {}

  void setInertia(const Mat3& inertia_body) { inertia_ = inertia_body; }
  void reset();

  Wrench update(const RigidBodyState& state, const PoseReference& reference, double dt);

 private:
  PoseControllerGains gains_;
  double mass_;
  Mat3 inertia_;
  PidState position_[3];
  PidState attitude_[3];
};

}  // namespace ehsim
