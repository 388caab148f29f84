#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ipr/core/types.hpp"
#include "ipr/sim/world.hpp"

namespace ipr::sim {

struct RegionNoise {
  double sigma_px = 0.0;         // Gaussian pixel noise std dev
  double outlier_rate = 0.0;     // probability of a gross mismatch, [0, 0.9]
  double outlier_radius = 0.0;   // uniform displacement radius, pixels
};

struct NoiseProfile {
  std::array<RegionNoise, kNumRegionClasses> per_class;

  const RegionNoise& for_class(RegionClass c) const {
    return per_class[static_cast<int>(c)];
  }
  void validate() const;
};

// One front-end feature observation: matched landmark, measured pixel, the
// scale-derived measurement sigma, and the observation context.
struct Observation {
  int landmark_id = -1;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double scale_sigma = 1.0;
  ContextFeatures context;
};

// Project all in-frustum landmarks into the camera at `pose` and corrupt
// the pixels per the landmark's region class: Gaussian noise of sigma_px,
// or (with probability outlier_rate) a displacement drawn uniformly inside
// outlier_radius. Context features come from the exact geometry.
std::vector<Observation> observe_features(const World& world, const ipr::Pose3& pose,
                                          const CameraIntrinsics& intr,
                                          const NoiseProfile& noise, uint64_t seed);

// Dense depth image from a supervisory sensor: per-pixel depth of the
// nearest landmark disc (fixed world radius, facing the camera) plus
// Gaussian noise sigma_sup; r_max sentinel where no surface is hit.
// Row-major height x width.
Eigen::MatrixXd supervisory_depth(const World& world, const ipr::Pose3& pose,
                                  const CameraIntrinsics& intr, double sigma_sup,
                                  uint64_t seed, double r_max, double disc_radius = 0.35);

// Exact projection, depth and context of every landmark visible from `pose`
// (no noise); the geometric ground truth the labelers are tested against.
struct VisibleLandmark {
  int landmark_id = -1;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double depth = 0.0;
  ContextFeatures context;
};
std::vector<VisibleLandmark> visible_landmarks(const World& world, const ipr::Pose3& pose,
                                               const CameraIntrinsics& intr);

}  // namespace ipr::sim
