#include "ipr/sim/camera.hpp"

#include <stdexcept>

namespace ipr::sim {

std::optional<Eigen::Vector2d> try_project(const CameraIntrinsics& intr, const Pose3& pose,
                                           const Eigen::Vector3d& point_world) {
  const Eigen::Vector3d p = pose.inverse() * point_world;
  if (p.z() < kMinDepth) return std::nullopt;
  return Eigen::Vector2d(intr.fx * p.x() / p.z() + intr.cx,
                         intr.fy * p.y() / p.z() + intr.cy);
}

Eigen::Vector2d project(const CameraIntrinsics& intr, const Pose3& pose,
                        const Eigen::Vector3d& point_world) {
  const auto px = try_project(intr, pose, point_world);
  if (!px) throw std::domain_error("project: point behind camera");
  return *px;
}

Eigen::Vector3d unproject(const CameraIntrinsics& intr, const Eigen::Vector2d& pixel,
                          double depth) {
  if (!(depth > 0.0)) throw std::invalid_argument("unproject: depth > 0 required");
  return {(pixel.x() - intr.cx) / intr.fx * depth, (pixel.y() - intr.cy) / intr.fy * depth,
          depth};
}

bool in_image(const CameraIntrinsics& intr, const Eigen::Vector2d& pixel) {
  return pixel.x() >= 0.0 && pixel.x() < intr.width && pixel.y() >= 0.0 &&
         pixel.y() < intr.height;
}

}  // namespace ipr::sim
