#include <doctest.h>

#include <cmath>

#include "ehsim/scissor.hpp"
#include "ehsim/spatial.hpp"

using namespace ehsim;

namespace {

ScissorParams tableParams() { return calibrateFromEnvelope(5.026, 24, 0.100); }

}  // namespace

TEST_CASE("fully folded reach is the clearance budget") {
  const auto p = tableParams();
  CHECK(extensionFromActuation(p.half_link_m, p) == doctest::Approx(0.100).epsilon(1e-12));
}

TEST_CASE("fully extended reach hits the envelope maximum exactly") {
  const auto p = tableParams();
  CHECK(std::abs(extensionFromActuation(0.0, p) - 5.026) < 1e-12);
}

TEST_CASE("extension at y = 0.1 m matches the closed form") {
  const auto p = tableParams();
  // Independent hand evaluation of x = L_E + L_B + (2N+3) sqrt(L_L^2 - y^2).
  const double ll = 4.926 / 27.0;
  const double expected = 0.1 + 27.0 * std::sqrt(ll * ll - 0.1 * 0.1);
  CHECK(extensionFromActuation(0.1, p) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(4.2201).epsilon(1e-4));
}

TEST_CASE("inverse map and round trip") {
  const auto p = tableParams();
  CHECK(actuationFromExtension(p.foldedExtension(), p) ==
        doctest::Approx(p.half_link_m).epsilon(1e-12));
  CHECK(actuationFromExtension(5.026, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(actuationFromExtension(extensionFromActuation(0.1, p), p) ==
        doctest::Approx(0.1).epsilon(1e-12));

  for (int i = 0; i <= 1000; ++i) {
    const double y = p.actuationMin() +
                     (p.half_link_m - p.actuationMin()) * static_cast<double>(i) / 1000.0;
    const double back = actuationFromExtension(extensionFromActuation(y, p), p);
    CHECK(std::abs(back - y) < 1e-9);
  }
}

TEST_CASE("extension is strictly decreasing in y") {
  const auto p = tableParams();
  double prev = extensionFromActuation(1e-6, p);
  for (int i = 1; i <= 200; ++i) {
    const double y = 1e-6 + (p.half_link_m - 2e-6) * i / 200.0;
    const double x = extensionFromActuation(y, p);
    CHECK(x < prev);
    prev = x;
  }
}

TEST_CASE("domain errors") {
  const auto p = tableParams();
  CHECK_THROWS_AS(extensionFromActuation(-0.01, p), std::domain_error);
  CHECK_THROWS_AS(extensionFromActuation(p.half_link_m + 0.01, p), std::domain_error);
  CHECK_THROWS_AS(actuationFromExtension(0.05, p), std::domain_error);
  CHECK_THROWS_AS(actuationFromExtension(5.5, p), std::domain_error);
  CHECK_THROWS_AS(extensionJacobian(p.half_link_m, p), std::domain_error);
}

TEST_CASE("jacobian against central finite differences") {
  const auto p = tableParams();
  const double h = 1e-6;
  CHECK(extensionJacobian(0.0, p) == 0.0);
  CHECK(extensionJacobian(p.half_link_m / 2, p) ==
        doctest::Approx(-27.0 / std::sqrt(3.0)).epsilon(1e-12));
  for (int i = 0; i <= 100; ++i) {
    const double y = p.half_link_m * (0.01 + 0.94 * i / 100.0);
    const double fd =
        (extensionFromActuation(y + h, p) - extensionFromActuation(y - h, p)) / (2 * h);
    CHECK(extensionJacobian(y, p) == doctest::Approx(fd).epsilon(1e-6));
  }
  const double fd01 = (extensionFromActuation(0.1 + h, p) - extensionFromActuation(0.1 - h, p)) /
                      (2 * h);
  CHECK(extensionJacobian(0.1, p) == doctest::Approx(fd01).epsilon(1e-6));
  CHECK(extensionJacobian(0.1, p) == doctest::Approx(-17.69).epsilon(1e-3));
}

TEST_CASE("calibration from the deployed envelope") {
  const auto p = tableParams();
  CHECK(p.pair_count == 12);
  CHECK(p.half_link_m == doctest::Approx(0.182444).epsilon(1e-5));
  CHECK(p.base_offset_m == doctest::Approx(0.050).epsilon(1e-12));
  // Fixpoint: the calibrated geometry reproduces the requested reach.
  CHECK(std::abs(extensionFromActuation(0.0, p) - 5.026) < 1e-12);
  // A full link (2 L_L) fits the folded envelope's 444.54 mm dimension.
  CHECK(2 * p.half_link_m < 0.44454);

  const auto small = calibrateFromEnvelope(1.0, 4, 0.1);
  CHECK(small.pair_count == 2);
  CHECK(small.half_link_m == doctest::Approx(0.9 / 7.0).epsilon(1e-12));

  CHECK_THROWS_AS(calibrateFromEnvelope(0.1, 24, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(calibrateFromEnvelope(5.0, 23, 0.1), std::invalid_argument);
}

TEST_CASE("end effector pose on the kinematic chain") {
  const auto p = tableParams();
  const MountFrame mount;
  const RigidBodyState base;

  EhsJointState folded;
  folded.actuation_m = p.half_link_m;
  const Pose tip = endEffectorPose(folded, p, mount, base);
  CHECK((tip.position - Vec3(p.foldedExtension(), 0, 0)).norm() < 1e-12);

  EhsJointState panned = folded;
  panned.pan_rad = M_PI / 2;
  const Pose tip90 = endEffectorPose(panned, p, mount, base);
  CHECK(tip90.position.norm() == doctest::Approx(p.foldedExtension()).epsilon(1e-12));
  CHECK(tip90.position.y() == doctest::Approx(p.foldedExtension()).epsilon(1e-12));

  // Distance from the mount equals the extension regardless of pan/pitch.
  for (int i = 0; i < 50; ++i) {
    EhsJointState j;
    j.pan_rad = -M_PI + 2 * M_PI * std::fmod(0.618034 * i, 1.0);
    j.pitch_rad = -1.2 + 2.4 * std::fmod(0.414214 * i, 1.0);
    j.actuation_m = p.actuationMin() +
                    (p.actuationMax() - p.actuationMin()) * std::fmod(0.732051 * i, 1.0);
    const Pose tp = endEffectorPose(j, p, mount, base);
    CHECK((tp.position - mount.position).norm() ==
          doctest::Approx(extensionFromActuation(j.actuation_m, p)).epsilon(1e-12));
  }
}

TEST_CASE("deployment terminal geometry: pan 135 deg, 4.5 m past the fold") {
  const auto p = tableParams();
  const MountFrame mount;
  const RigidBodyState base;
  EhsJointState j;
  j.pan_rad = 135.0 * M_PI / 180.0;
  j.actuation_m = actuationFromExtension(p.foldedExtension() + 4.5, p);
  const Pose tip = endEffectorPose(j, p, mount, base);
  const double reach = p.foldedExtension() + 4.5;
  const Vec3 expected(reach * std::cos(j.pan_rad), reach * std::sin(j.pan_rad), 0.0);
  CHECK((tip.position - expected).norm() < 1e-12);
}
