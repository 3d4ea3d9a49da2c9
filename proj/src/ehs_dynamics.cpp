#include "ehsim/ehs_dynamics.hpp"

#include <cmath>
#include <numeric>

namespace ehsim {

EhsMassModel EhsMassModel::fromSplit(double total_kg, int pair_count, double link_fraction,
                                     double bar_fraction, double effector_fraction) {
  if (!(total_kg > 0.0) || pair_count < 1) {
    throw std::invalid_argument("EhsMassModel: total mass and pair count must be positive");
  }
  const double sum = link_fraction + bar_fraction + effector_fraction;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("EhsMassModel: mass fractions must sum to 1");
  }
  EhsMassModel m;
  m.total_mass_kg = total_kg;
  m.link_masses_kg.assign(pair_count, link_fraction * total_kg / pair_count);
  m.actuation_bar_mass_kg = bar_fraction * total_kg;
  m.effector_mass_kg = effector_fraction * total_kg;
  return m;
}

std::vector<double> linkStations(const EhsJointState& joints, const ScissorParams& p) {
  const double y = joints.actuation_m;
  const double h = std::sqrt(p.half_link_m * p.half_link_m - y * y);
  std::vector<double> stations;
  stations.reserve(p.pair_count + 2);
  for (int k = 0; k <= p.pair_count; ++k) {
    stations.push_back(p.base_offset_m + 2.0 * k * h);
  }
  stations.push_back(extensionFromActuation(y, p));
  return stations;
}

LumpedMasses lumpedMasses(const EhsJointState& joints, const ScissorParams& p,
                          const EhsMassModel& model, const MountFrame& mount) {
  const double y = joints.actuation_m;
  const double h = std::sqrt(p.half_link_m * p.half_link_m - y * y);
  if (!(h > 0.0)) throw std::domain_error("lumpedMasses: folded singularity (y = L_L)");

  const double c1 = std::cos(joints.pan_rad), s1 = std::sin(joints.pan_rad);
  const double c2 = std::cos(joints.pitch_rad), s2 = std::sin(joints.pitch_rad);
  const Mat3 rm = mount.orientation.toRotationMatrix();

  LumpedMasses lm;
  const std::size_t n = model.link_masses_kg.size() + 2;
  lm.masses.reserve(n);
  lm.positions.reserve(n);
  lm.velocities.reserve(n);

  // Axial station s and its derivative ds/dy for each lumped mass.
  auto emit = [&](double mass, double s, double ds_dy) {
    // Local boom frame -> mount frame: Rz(pan) Ry(pitch) * (s, 0, 0).
    const Vec3 p_local(s * c2 * c1, s * c2 * s1, -s * s2);
    const double s_dot = ds_dy * joints.actuation_rate;
    Vec3 v_local = joints.pan_rate * Vec3(-s * c2 * s1, s * c2 * c1, 0.0) +
                   joints.pitch_rate * Vec3(-s * s2 * c1, -s * s2 * s1, -s * c2) +
                   s_dot * Vec3(c2 * c1, c2 * s1, -s2);
    lm.masses.push_back(mass);
    lm.positions.push_back(mount.position + rm * p_local);
    lm.velocities.push_back(rm * v_local);
    lm.pan_inertia += mass * s * s * c2 * c2;
    lm.pitch_inertia += mass * s * s;
    lm.actuation_mass += mass * ds_dy * ds_dy;
  };

  // Actuation bar: axially fixed at the mount; its sliders move at +-ydot,
  // which cancels in momentum but loads the prismatic joint.
  emit(model.actuation_bar_mass_kg, 0.0, 0.0);
  lm.actuation_mass += model.actuation_bar_mass_kg;

  // Crossing pivots at odd multiples of h past L_B.
  for (std::size_t j = 0; j < model.link_masses_kg.size(); ++j) {
    const double k = 2.0 * static_cast<double>(j) + 1.0;
    emit(model.link_masses_kg[j], p.base_offset_m + k * h, -k * y / h);
  }
  const double reach = 2.0 * p.pair_count + 3.0;
  emit(model.effector_mass_kg, extensionFromActuation(y, p), -reach * y / h);
  return lm;
}

EhsDynamicState makeEhsState(const EhsJointState& joints, const ScissorParams& p,
                             const EhsMassModel& model, const MountFrame& mount) {
  return EhsDynamicState{joints, lumpedMasses(joints, p, model, mount)};
}

std::pair<Vec3, Vec3> ehsMomentum(const EhsDynamicState& state, const EhsMassModel& model,
                                  const RigidBodyState& base) {
  (void)model;
  const Mat3 rot = base.attitude.toRotationMatrix();
  const Vec3& w = base.angular_velocity;
  Vec3 lin = Vec3::Zero(), ang = Vec3::Zero();
  for (std::size_t i = 0; i < state.masses.masses.size(); ++i) {
    const Vec3& p_b = state.masses.positions[i];
    const Vec3 r = rot * p_b;  // inertial offset from base CoM
    const Vec3 v = base.linear_velocity + rot * (w.cross(p_b) + state.masses.velocities[i]);
    lin += state.masses.masses[i] * v;
    ang += state.masses.masses[i] * r.cross(v);
  }
  return {lin, ang};
}

Wrench reactionWrench(const EhsDynamicState& state, const Vec3& joint_accels,
                      const ScissorParams& p, const EhsMassModel& model, const MountFrame& mount,
                      const RigidBodyState& base) {
  // Central finite difference of the EHS momentum along the commanded joint
  // motion, base pose held fixed.
  constexpr double eps = 1e-4;
  auto perturb = [&](double sign) {
    EhsJointState j = state.joints;
    const double t = sign * eps;
    j.pan_rad += j.pan_rate * t + 0.5 * joint_accels.x() * t * t;
    j.pitch_rad += j.pitch_rate * t + 0.5 * joint_accels.y() * t * t;
    j.actuation_m += j.actuation_rate * t + 0.5 * joint_accels.z() * t * t;
    j.pan_rate += joint_accels.x() * t;
    j.pitch_rate += joint_accels.y() * t;
    j.actuation_rate += joint_accels.z() * t;
    return ehsMomentum(makeEhsState(j, p, model, mount), model, base);
  };
  const auto plus = perturb(1.0);
  const auto minus = perturb(-1.0);
  const Vec3 dp = (plus.first - minus.first) / (2.0 * eps);
  const Vec3 dl = (plus.second - minus.second) / (2.0 * eps);

  const Mat3 rot_t = base.attitude.toRotationMatrix().transpose();
  return Wrench{rot_t * (-dp), rot_t * (-dl), Frame::Body};
}

Mat3 compositeInertia(const LumpedMasses& lm, const Mat3& base_inertia, double base_mass,
                      Vec3* com_offset) {
  const double ehs_mass = std::accumulate(lm.masses.begin(), lm.masses.end(), 0.0);
  const double total = base_mass + ehs_mass;
  Vec3 com = Vec3::Zero();
  for (std::size_t i = 0; i < lm.masses.size(); ++i) com += lm.masses[i] * lm.positions[i];
  com /= total;  // base CoM at the body origin
  if (com_offset) *com_offset = com;

  auto pointTerm = [](double m, const Vec3& d) -> Mat3 {
    return m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
  };
  Mat3 inertia = base_inertia + pointTerm(base_mass, -com);
  for (std::size_t i = 0; i < lm.masses.size(); ++i) {
    inertia += pointTerm(lm.masses[i], lm.positions[i] - com);
  }
  return inertia;
}

}  // namespace ehsim
