#include "ipr/core/pose.hpp"

#include <cmath>

namespace ipr {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Quaterniond so3_exp(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    Eigen::Quaterniond q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
    return q;
  }
  const Eigen::Vector3d axis = phi / angle;
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
}

Eigen::Vector3d so3_log(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // shortest rotation
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vn, q.w());
  return q.vec() * (angle / vn);
}

Vector6d pose_error(const Pose3& estimate, const Pose3& reference) {
  const Pose3 rel = reference.inverse() * estimate;
  Vector6d e;
  e.head<3>() = rel.translation;
  e.tail<3>() = so3_log(rel.rotation);
  return e;
}

Pose3 perturb_pose(const Pose3& p, const Eigen::Vector3d& dt, const Eigen::Vector3d& phi) {
  return {p.rotation * so3_exp(phi), p.translation + dt};
}

}  // namespace ipr
