#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ehsim/spatial.hpp"
#include "ehsim/vehicle.hpp"

using namespace ehsim;

namespace {

FreeFloatingSystem tableSystem() {
  VehicleConfig cfg;
  cfg.dry_mass_kg = 27.7;
  cfg.dims_m = Vec3(0.2463, 0.2463, 0.454);
  cfg.body_inertia = deriveBoxInertia(cfg.dry_mass_kg, cfg.dims_m);
  cfg.mounts.push_back(MountFrame{Vec3(0.12315, 0, 0), Quat::Identity()});
  const auto params = calibrateFromEnvelope(5.026, 24, 0.100);
  const auto mass = EhsMassModel::fromSplit(2.41, 12, 0.85, 0.10, 0.05);
  return FreeFloatingSystem(cfg, params, mass);
}

}  // namespace

TEST_CASE("box inertia") {
  const Mat3 cube = deriveBoxInertia(12.0, Vec3(1, 1, 1));
  CHECK(cube(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cube(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cube(2, 2) == doctest::Approx(2.0).epsilon(1e-15));

  const Mat3 sat = deriveBoxInertia(27.7, Vec3(0.2463, 0.2463, 0.454));
  // Uniform-box oracle: I_xx = m (b^2 + c^2) / 12.
  CHECK(sat(0, 0) == doctest::Approx(27.7 * (0.2463 * 0.2463 + 0.454 * 0.454) / 12).epsilon(1e-12));
  CHECK(sat(0, 0) == doctest::Approx(0.6158).epsilon(1e-3));
  CHECK(sat(2, 2) == doctest::Approx(0.2801).epsilon(1e-3));

  // Degenerate dimension: thin-rod limit.
  const Mat3 rod = deriveBoxInertia(3.0, Vec3(0, 0, 2.0));
  CHECK(rod(0, 0) == doctest::Approx(3.0 * 4.0 / 12).epsilon(1e-15));
  CHECK(rod(2, 2) == 0.0);
}

TEST_CASE("saturation clamps per channel and flags") {
  ActuatorLimits limits;  // Table defaults: 0.1 N, 0.2 N m, 40 N
  ControlCommand cmd;
  cmd.body.force = Vec3(0.05, 0, 0);
  auto ok = applySaturation(cmd, limits);
  CHECK(ok.flags == 0);
  CHECK(ok.command.body.force.x() == 0.05);

  cmd.body.force = Vec3(0.5, 0, 0);
  auto clamped = applySaturation(cmd, limits);
  CHECK(clamped.command.body.force.x() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK((clamped.flags & kSatForceX) != 0);
  CHECK((clamped.flags & kSatForceY) == 0);

  cmd = ControlCommand{};
  cmd.actuation_force_n = 60.0;
  auto pris = applySaturation(cmd, limits);
  CHECK(pris.command.actuation_force_n == doctest::Approx(40.0).epsilon(1e-15));
  CHECK((pris.flags & kSatActuation) != 0);
}

TEST_CASE("saturation is idempotent and monotone") {
  ActuatorLimits limits;
  for (int i = 0; i < 100; ++i) {
    ControlCommand cmd;
    const double s = -3.0 + 6.0 * std::fmod(0.618034 * i, 1.0);
    cmd.body.force = s * Vec3(0.4, 0.05, 1.7);
    cmd.body.torque = s * Vec3(0.1, 0.5, 0.01);
    cmd.pan_torque_nm = 0.7 * s;
    cmd.actuation_force_n = 80.0 * s;
    const auto once = applySaturation(cmd, limits);
    const auto twice = applySaturation(once.command, limits);
    CHECK(twice.flags == 0);
    CHECK((twice.command.body.force - once.command.body.force).norm() == 0.0);
    CHECK(once.command.body.force.cwiseAbs().maxCoeff() <= 0.1);
    CHECK(once.command.body.torque.cwiseAbs().maxCoeff() <= 0.2);
    CHECK(std::abs(once.command.actuation_force_n) <= 40.0);
  }
}

TEST_CASE("zero command at rest is a fixed point") {
  const auto sys = tableSystem();
  EhsJointState joints;
  joints.actuation_m = 0.15;
  auto state = sys.makeState(RigidBodyState{}, joints);
  const auto next = sys.step(state, ControlCommand{}, 1e-3);
  CHECK((next.base.position - state.base.position).norm() == 0.0);
  CHECK(next.base.linear_velocity.norm() == 0.0);
  CHECK(next.base.angular_velocity.norm() < 1e-15);
  CHECK(next.joints.actuation_m == state.joints.actuation_m);
}

TEST_CASE("internal motion conserves momentum and the CoM") {
  const auto sys = tableSystem();
  EhsJointState joints;
  joints.actuation_m = 0.17;
  auto state = sys.makeState(RigidBodyState{}, joints);
  const Vec3 com0 = sys.measuredCom(state);

  // Prismatic effort toward deployment (negative y direction), no external
  // wrench, then a coast phase.
  ControlCommand cmd;
  cmd.actuation_force_n = -0.5;
  for (int i = 0; i < 5000; ++i) state = sys.step(state, cmd, 1e-3);

  CHECK(state.joints.actuation_m < 0.17);         // boom deploying
  CHECK(state.base.linear_velocity.x() < 0.0);    // base recoils opposite the boom on the +x mount
  auto [lin, ang] = sys.measuredMomentum(state);
  CHECK(lin.norm() < 1e-12);
  CHECK(ang.norm() < 1e-9);
  CHECK((sys.measuredCom(state) - com0).norm() < 1e-9);

  for (int i = 0; i < 5000; ++i) state = sys.step(state, ControlCommand{}, 1e-3);
  auto [lin2, ang2] = sys.measuredMomentum(state);
  CHECK(lin2.norm() < 1e-12);
  CHECK(ang2.norm() < 1e-9);
  CHECK((sys.measuredCom(state) - com0).norm() < 1e-9);
}

TEST_CASE("stepping is deterministic") {
  const auto sys = tableSystem();
  EhsJointState joints;
  joints.actuation_m = 0.15;
  ControlCommand cmd;
  cmd.actuation_force_n = 1.0;
  cmd.pan_torque_nm = 0.01;
  cmd.body.force = Vec3(0.02, -0.01, 0.005);

  auto a = sys.makeState(RigidBodyState{}, joints);
  auto b = sys.makeState(RigidBodyState{}, joints);
  for (int i = 0; i < 5000; ++i) {
    a = sys.step(a, cmd, 1e-3);
    b = sys.step(b, cmd, 1e-3);
  }
  CHECK(std::memcmp(&a.base.position, &b.base.position, sizeof(Vec3)) == 0);
  CHECK(a.joints.actuation_m == b.joints.actuation_m);
  CHECK((a.attitude.coeffs() - b.attitude.coeffs()).norm() == 0.0);
}

TEST_CASE("prismatic hard stop clamps with an event flag") {
  const auto sys = tableSystem();
  EhsJointState joints;
  joints.actuation_m = sys.scissor().actuationMin() + 1e-5;
  auto state = sys.makeState(RigidBodyState{}, joints);
  ControlCommand cmd;
  cmd.actuation_force_n = -5.0;  // push toward the extended stop
  bool hit = false;
  for (int i = 0; i < 20000 && !hit; ++i) {
    state = sys.step(state, cmd, 1e-3);
    hit = state.joint_limit_hits != 0;
  }
  CHECK(hit);
  CHECK(state.joints.actuation_m == sys.scissor().actuationMin());
  CHECK(state.joints.actuation_rate == 0.0);
}

TEST_CASE("constant force on the whole stack matches F*t/m") {
  const auto sys = tableSystem();
  EhsJointState joints;
  joints.actuation_m = 0.18;
  auto state = sys.makeState(RigidBodyState{}, joints);
  ControlCommand cmd;
  cmd.body.force = Vec3(0.1, 0, 0);
  for (int i = 0; i < 10000; ++i) state = sys.step(state, cmd, 1e-3);
  auto [lin, ang] = sys.measuredMomentum(state);
  CHECK(lin.x() == doctest::Approx(0.1 * 10.0).epsilon(1e-12));
  CHECK(state.base.linear_velocity.x() ==
        doctest::Approx(0.1 * 10.0 / sys.totalMass()).epsilon(1e-9));
}
