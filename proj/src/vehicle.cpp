#include "ehsim/vehicle.hpp"

#include <cmath>

#include "ehsim/spatial.hpp"

namespace ehsim {

namespace {

constexpr double kMinJointInertia = 1e-9;

double clampFlag(double v, double limit, std::uint32_t bit, std::uint32_t& flags) {
  if (std::abs(v) > limit) {
    flags |= bit;
    return std::copysign(limit, v);
  }
  return v;
}

double wrapAngle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  return a <= -M_PI ? a + 2.0 * M_PI : a;
}

struct MomentumGeometry {
  LumpedMasses lm;
  Vec3 rho;       // system CoM offset from base CoM, body frame
  Vec3 rho_dot;   // body-frame rate from joint motion
  Mat3 inertia;   // composite, about system CoM, body frame
  Vec3 h_rel;     // relative angular momentum term, body frame
};

MomentumGeometry momentumGeometry(const EhsJointState& joints, const ScissorParams& scissor,
                                  const EhsMassModel& model, const MountFrame& mount,
                                  const Mat3& base_inertia, double base_mass, double total_mass) {
  MomentumGeometry g;
  g.lm = lumpedMasses(joints, scissor, model, mount);

  Vec3 sum_mp = Vec3::Zero(), sum_mv = Vec3::Zero();
  for (std::size_t i = 0; i < g.lm.masses.size(); ++i) {
    sum_mp += g.lm.masses[i] * g.lm.positions[i];
    sum_mv += g.lm.masses[i] * g.lm.velocities[i];
  }
  g.rho = sum_mp / total_mass;
  g.rho_dot = sum_mv / total_mass;

  g.inertia = compositeInertia(g.lm, base_inertia, base_mass);
  g.h_rel = base_mass * g.rho.cross(g.rho_dot);
  for (std::size_t i = 0; i < g.lm.masses.size(); ++i) {
    g.h_rel += g.lm.masses[i] *
               (g.lm.positions[i] - g.rho).cross(g.lm.velocities[i] - g.rho_dot);
  }
  return g;
}

}  // namespace

SaturatedCommand applySaturation(const ControlCommand& cmd, const ActuatorLimits& limits) {
  SaturatedCommand out;
  out.command = cmd;
  auto& c = out.command;
  c.body.force.x() = clampFlag(c.body.force.x(), limits.max_body_force_per_axis_n, kSatForceX, out.flags);
  c.body.force.y() = clampFlag(c.body.force.y(), limits.max_body_force_per_axis_n, kSatForceY, out.flags);
  c.body.force.z() = clampFlag(c.body.force.z(), limits.max_body_force_per_axis_n, kSatForceZ, out.flags);
  c.body.torque.x() = clampFlag(c.body.torque.x(), limits.max_body_torque_per_axis_nm, kSatTorqueX, out.flags);
  c.body.torque.y() = clampFlag(c.body.torque.y(), limits.max_body_torque_per_axis_nm, kSatTorqueY, out.flags);
  c.body.torque.z() = clampFlag(c.body.torque.z(), limits.max_body_torque_per_axis_nm, kSatTorqueZ, out.flags);
  c.pan_torque_nm = clampFlag(c.pan_torque_nm, limits.max_revolute_torque_nm, kSatPan, out.flags);
  c.pitch_torque_nm = clampFlag(c.pitch_torque_nm, limits.max_revolute_torque_nm, kSatPitch, out.flags);
  c.actuation_force_n = clampFlag(c.actuation_force_n, limits.max_prismatic_force_n, kSatActuation, out.flags);
  return out;
}

Mat3 deriveBoxInertia(double mass_kg, const Vec3& dims_m) {
  if (!(mass_kg > 0.0) || !(dims_m.minCoeff() >= 0.0)) {
    throw std::invalid_argument("deriveBoxInertia: mass and dimensions must be non-negative");
  }
  const double a2 = dims_m.x() * dims_m.x();
  const double b2 = dims_m.y() * dims_m.y();
  const double c2 = dims_m.z() * dims_m.z();
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = mass_kg * (b2 + c2) / 12.0;
  inertia(1, 1) = mass_kg * (a2 + c2) / 12.0;
  inertia(2, 2) = mass_kg * (a2 + b2) / 12.0;
  return inertia;
}

FreeFloatingSystem::FreeFloatingSystem(VehicleConfig vehicle, ScissorParams scissor,
                                       EhsMassModel mass_model)
    : vehicle_(std::move(vehicle)), scissor_(scissor), mass_model_(std::move(mass_model)) {
  if (vehicle_.mounts.size() != 1) {
    throw std::invalid_argument("FreeFloatingSystem: exactly one EHS mount is supported");
  }
  total_mass_ = vehicle_.dry_mass_kg + mass_model_.total_mass_kg;
}

void FreeFloatingSystem::deriveBase(CoupledState& s) const {
  const auto g = momentumGeometry(s.joints, scissor_, mass_model_, mount(),
                                  vehicle_.body_inertia, vehicle_.dry_mass_kg, total_mass_);
  const Mat3 rot = s.attitude.toRotationMatrix();
  const Vec3 omega = g.inertia.ldlt().solve(rot.transpose() * s.angular_momentum - g.h_rel);
  s.base.attitude = s.attitude;
  s.base.angular_velocity = omega;
  s.base.linear_velocity =
      s.linear_momentum / total_mass_ - rot * (omega.cross(g.rho) + g.rho_dot);
  s.base.position = s.com - rot * g.rho;
}

CoupledState FreeFloatingSystem::makeState(const RigidBodyState& base,
                                           const EhsJointState& joints) const {
  const auto g = momentumGeometry(joints, scissor_, mass_model_, mount(), vehicle_.body_inertia,
                                  vehicle_.dry_mass_kg, total_mass_);
  const Mat3 rot = base.attitude.toRotationMatrix();
  CoupledState s;
  s.joints = joints;
  s.attitude = base.attitude.normalized();
  s.com = base.position + rot * g.rho;
  s.linear_momentum = total_mass_ * (base.linear_velocity +
                                     rot * (base.angular_velocity.cross(g.rho) + g.rho_dot));
  s.angular_momentum = rot * (g.inertia * base.angular_velocity + g.h_rel);
  deriveBase(s);
  return s;
}

CoupledState FreeFloatingSystem::step(const CoupledState& state, const ControlCommand& cmd,
                                      double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

  CoupledState next = state;
  next.joint_limit_hits = 0;

  // Simplified joint response: effort minus viscous friction over the
  // configuration-dependent effective inertia.
  const auto g0 = momentumGeometry(state.joints, scissor_, mass_model_, mount(),
                                   vehicle_.body_inertia, vehicle_.dry_mass_kg, total_mass_);
  auto& j = next.joints;
  const double pan_acc = (cmd.pan_torque_nm - mass_model_.revolute_friction_nms * j.pan_rate) /
                         std::max(g0.lm.pan_inertia, kMinJointInertia);
  const double pitch_acc =
      (cmd.pitch_torque_nm - mass_model_.revolute_friction_nms * j.pitch_rate) /
      std::max(g0.lm.pitch_inertia, kMinJointInertia);
  const double act_acc =
      (cmd.actuation_force_n - mass_model_.prismatic_friction_nspm * j.actuation_rate) /
      std::max(g0.lm.actuation_mass, kMinJointInertia);

  j.pan_rate += dt * pan_acc;
  j.pitch_rate += dt * pitch_acc;
  j.actuation_rate += dt * act_acc;
  j.pan_rad = wrapAngle(j.pan_rad + dt * j.pan_rate);
  j.pitch_rad = wrapAngle(j.pitch_rad + dt * j.pitch_rate);
  j.actuation_m += dt * j.actuation_rate;
  if (j.actuation_m < scissor_.actuationMin()) {
    j.actuation_m = scissor_.actuationMin();
    if (j.actuation_rate < 0.0) j.actuation_rate = 0.0;
    next.joint_limit_hits |= kSatActuation;
  } else if (j.actuation_m > scissor_.actuationMax()) {
    j.actuation_m = scissor_.actuationMax();
    if (j.actuation_rate > 0.0) j.actuation_rate = 0.0;
    next.joint_limit_hits |= kSatActuation;
  }

  // External wrench is the only source of momentum change. Force acts at
  // the combined CoM, so it contributes no torque about it.
  const Mat3 rot = state.attitude.toRotationMatrix();
  const Vec3 force = cmd.body.frame == Frame::Inertial ? cmd.body.force : rot * cmd.body.force;
  const Vec3 torque = cmd.body.frame == Frame::Inertial ? cmd.body.torque : rot * cmd.body.torque;
  next.linear_momentum += dt * force;
  next.angular_momentum += dt * torque;

  const auto g1 = momentumGeometry(j, scissor_, mass_model_, mount(), vehicle_.body_inertia,
                                   vehicle_.dry_mass_kg, total_mass_);
  const Vec3 omega =
      g1.inertia.ldlt().solve(rot.transpose() * next.angular_momentum - g1.h_rel);
  next.attitude = (state.attitude * quatExp(dt * omega)).normalized();
  next.com += dt * next.linear_momentum / total_mass_;

  deriveBase(next);
  if (!allFinite(next.base) || !std::isfinite(j.actuation_m)) {
    throw SimulationFault("step: state went non-finite");
  }
  return next;
}

std::pair<Vec3, Vec3> FreeFloatingSystem::measuredMomentum(const CoupledState& state) const {
  const auto ehs = makeEhsState(state.joints, scissor_, mass_model_, mount());
  auto [lin_ehs, ang_ehs] = ehsMomentum(ehs, mass_model_, state.base);

  const Mat3 rot = state.base.attitude.toRotationMatrix();
  const Vec3 lin = vehicle_.dry_mass_kg * state.base.linear_velocity + lin_ehs;
  const Vec3 com = measuredCom(state);
  const Vec3 r_base = state.base.position - com;
  Vec3 ang = rot * (vehicle_.body_inertia * state.base.angular_velocity) +
             vehicle_.dry_mass_kg * r_base.cross(state.base.linear_velocity) + ang_ehs +
             r_base.cross(lin_ehs);
  return {lin, ang};
}

Vec3 FreeFloatingSystem::measuredCom(const CoupledState& state) const {
  const auto lm = lumpedMasses(state.joints, scissor_, mass_model_, mount());
  const Mat3 rot = state.base.attitude.toRotationMatrix();
  Vec3 weighted = vehicle_.dry_mass_kg * state.base.position;
  for (std::size_t i = 0; i < lm.masses.size(); ++i) {
    weighted += lm.masses[i] * (state.base.position + rot * lm.positions[i]);
  }
  return weighted / total_mass_;
}

Mat3 FreeFloatingSystem::currentInertia(const CoupledState& state) const {
  const auto lm = lumpedMasses(state.joints, scissor_, mass_model_, mount());
  return compositeInertia(lm, vehicle_.body_inertia, vehicle_.dry_mass_kg);
}

}  // namespace ehsim
