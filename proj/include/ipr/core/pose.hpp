#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace ipr {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Rigid transform, stored as unit quaternion + translation. Trajectory poses
// are camera-to-world transforms: p_world = rotation * p_camera + translation.
struct Pose3 {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Pose3() = default;
  Pose3(const Eigen::Quaterniond& q, const Eigen::Vector3d& t)
      : rotation(q.normalized()), translation(t) {}

  static Pose3 identity() { return {}; }

  Pose3 operator*(const Pose3& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  Pose3 inverse() const {
    const Eigen::Quaterniond qi = rotation.conjugate();
    return {qi, -(qi * translation)};
  }
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

// Axis-angle exponential / logarithm on SO(3).
Eigen::Quaterniond so3_exp(const Eigen::Vector3d& phi);
Eigen::Vector3d so3_log(const Eigen::Quaterniond& q);

// Decoupled 6-vector error between two poses: [t_e - t_r of the relative
// transform; so3_log of the relative rotation], with relative = ref^-1 * est.
// This is the ominus used for manifold-valued states.
Vector6d pose_error(const Pose3& estimate, const Pose3& reference);

// Right-perturb a pose: rotation <- rotation * exp(phi), translation += dt.
Pose3 perturb_pose(const Pose3& p, const Eigen::Vector3d& dt, const Eigen::Vector3d& phi);

}  // namespace ipr
