#include "ipr/slam/residual.hpp"

#include "ipr/sim/camera.hpp"

namespace ipr::slam {

ReprojResidual reprojection_residual(const Pose3& pose, const Eigen::Vector3d& point_world,
                                     const Eigen::Vector2d& obs_pixel,
                                     const CameraIntrinsics& intr) {
  ReprojResidual out;
  const Pose3 t_cw = pose.inverse();
  const Eigen::Vector3d p = t_cw * point_world;  // point in camera frame
  if (p.z() < sim::kMinDepth) {
    out.behind_camera = true;
    return out;
  }
  const double iz = 1.0 / p.z();
  out.r = obs_pixel - Eigen::Vector2d(intr.fx * p.x() * iz + intr.cx,
                                      intr.fy * p.y() * iz + intr.cy);

  // d(projection)/dp in the camera frame
  Eigen::Matrix<double, 2, 3> dproj;
  dproj << intr.fx * iz, 0.0, -intr.fx * p.x() * iz * iz,
           0.0, intr.fy * iz, -intr.fy * p.y() * iz * iz;

  // dp/d_rho = I, dp/d_phi = -skew(R_cw p_w) = -skew(p - t_cw)
  out.j_pose.block<2, 3>(0, 0) = -dproj;
  out.j_pose.block<2, 3>(0, 3) = dproj * skew(p - t_cw.translation);
  out.j_point = -dproj * t_cw.rotation.toRotationMatrix();
  return out;
}

}  // namespace ipr::slam
