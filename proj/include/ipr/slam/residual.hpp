#pragma once

#include "ipr/core/pose.hpp"
#include "ipr/core/types.hpp"

namespace ipr::slam {

// Reprojection residual r = obs - project(point into camera at `pose`) with
// analytic Jacobians. The pose Jacobian is taken w.r.t. a decoupled
// perturbation of the camera-from-world transform T_cw = pose^-1:
//   t_cw <- t_cw + d_rho,  R_cw <- exp(d_phi) R_cw,
// column order [d_rho (3) | d_phi (3)]. The point Jacobian is w.r.t. the
// world point.
struct ReprojResidual {
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  Eigen::Matrix<double, 2, 6> j_pose = Eigen::Matrix<double, 2, 6>::Zero();
  Eigen::Matrix<double, 2, 3> j_point = Eigen::Matrix<double, 2, 3>::Zero();
  bool behind_camera = false;  // residual must be dropped this iteration
};

ReprojResidual reprojection_residual(const Pose3& pose, const Eigen::Vector3d& point_world,
                                     const Eigen::Vector2d& obs_pixel,
                                     const CameraIntrinsics& intr);

}  // namespace ipr::slam
