#pragma once

#include <optional>

#include "ipr/core/pose.hpp"
#include "ipr/core/types.hpp"

namespace ipr::sim {

// Minimum depth in front of the camera for a projection to be valid.
constexpr double kMinDepth = 0.01;

// Pinhole projection of a world point into the camera at `pose`
// (pose = camera-to-world). Throws std::domain_error if the point is at or
// behind the near plane.
Eigen::Vector2d project(const CameraIntrinsics& intr, const Pose3& pose,
                        const Eigen::Vector3d& point_world);

// Same, but signals behind-camera by returning nullopt.
std::optional<Eigen::Vector2d> try_project(const CameraIntrinsics& intr, const Pose3& pose,
                                           const Eigen::Vector3d& point_world);

// Inverse of project at the given depth; result is in the camera frame.
// Throws std::invalid_argument for depth <= 0.
Eigen::Vector3d unproject(const CameraIntrinsics& intr, const Eigen::Vector2d& pixel,
                          double depth);

bool in_image(const CameraIntrinsics& intr, const Eigen::Vector2d& pixel);

}  // namespace ipr::sim
