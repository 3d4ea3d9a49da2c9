#include "ehsim/scissor.hpp"

#include <cmath>

namespace ehsim {

namespace {
constexpr double kDomainSlack = 1e-12;
}

double extensionFromActuation(double y, const ScissorParams& p) {
  if (!(y >= -kDomainSlack && y <= p.half_link_m + kDomainSlack)) {
    throw std::domain_error("extensionFromActuation: y outside [0, L_L]");
  }
  y = std::clamp(y, 0.0, p.half_link_m);
  const double h = std::sqrt(p.half_link_m * p.half_link_m - y * y);
  return p.effector_offset_m + p.base_offset_m + (2 * p.pair_count + 3) * h;
}

double actuationFromExtension(double x, const ScissorParams& p) {
  if (!(x >= p.foldedExtension() - kDomainSlack && x <= p.maxExtension() + kDomainSlack)) {
    throw std::domain_error("actuationFromExtension: x outside reachable range");
  }
  const double h = std::clamp((x - p.foldedExtension()) / (2 * p.pair_count + 3), 0.0,
                              p.half_link_m);
  const double y2 = p.half_link_m * p.half_link_m - h * h;
  return std::sqrt(std::max(y2, 0.0));
}

double extensionJacobian(double y, const ScissorParams& p) {
  if (!(y >= -kDomainSlack && y < p.half_link_m)) {
    throw std::domain_error("extensionJacobian: singular at y = L_L");
  }
  y = std::max(y, 0.0);
  const double h = std::sqrt(p.half_link_m * p.half_link_m - y * y);
  return -(2 * p.pair_count + 3) * y / h;
}

ScissorParams calibrateFromEnvelope(double max_extension_m, int link_count,
                                    double mount_clearance_m) {
  if (link_count < 4 || link_count % 2 != 0) {
    throw std::invalid_argument("calibrateFromEnvelope: link_count must be even and >= 4");
  }
  const int pairs = link_count / 2;
  const double half_link = (max_extension_m - mount_clearance_m) / (2 * pairs + 3);
  if (!(half_link > 0.0)) {
    throw std::invalid_argument("calibrateFromEnvelope: infeasible geometry (L_L <= 0)");
  }
  return ScissorParams{half_link, 0.5 * mount_clearance_m, 0.5 * mount_clearance_m, pairs};
}

Pose endEffectorPose(const EhsJointState& joints, const ScissorParams& p, const MountFrame& mount,
                     const RigidBodyState& base) {
  const double x = extensionFromActuation(joints.actuation_m, p);
  const Quat boom = Quat(Eigen::AngleAxisd(joints.pan_rad, Vec3::UnitZ()) *
                         Eigen::AngleAxisd(joints.pitch_rad, Vec3::UnitY()));
  const Quat orient_body = mount.orientation * boom;
  const Vec3 pos_body = mount.position + orient_body * Vec3(x, 0.0, 0.0);

  Pose out;
  out.orientation = (base.attitude * orient_body).normalized();
  out.position = base.position + base.attitude * pos_body;
  return out;
}

}  // namespace ehsim
