#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ipr/core/types.hpp"
#include "ipr/sim/trajectory.hpp"

namespace ipr::sim {

struct Landmark {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  RegionClass region = RegionClass::kClean;
  double texture_freq = 0.0;  // [0,1]
  double brightness = 0.5;    // [0,1]
};

struct World {
  std::vector<Landmark> landmarks;
  uint64_t seed = 0;
};

struct WorldConfig {
  int n_landmarks = 260;
  // Fractions per region class, indexed by RegionClass; must sum to 1.
  std::array<double, kNumRegionClasses> region_mix = {1.0, 0.0, 0.0, 0.0};

  // Landmarks are scattered in the camera frame of a randomly chosen anchor
  // pose: lateral/vertical offsets and a depth band.
  double lateral = 9.0;
  double vertical = 2.5;
  double depth_min = 4.0;
  double depth_max = 26.0;

  // Optional per-class depth bands overriding [depth_min, depth_max];
  // entries with max <= 0 fall back to the default band.
  std::array<double, kNumRegionClasses> class_depth_min = {0, 0, 0, 0};
  std::array<double, kNumRegionClasses> class_depth_max = {0, 0, 0, 0};

  // When set, degraded classes concentrate in contiguous sections of the
  // corridor instead of mixing uniformly, so some viewpoints are dominated
  // by unreliable features.
  bool cluster_degraded = false;

  // Radius of the disc each landmark renders as in the supervisory depth
  // image.
  double disc_radius = 0.35;

  // Anchor poses of the corridor. Empty: landmarks scatter around identity.
  std::vector<ipr::Pose3> corridor_poses;
};

// Deterministic for a fixed seed. Throws std::invalid_argument if the region
// mix is empty (sums to zero) or has negative entries.
World build_world(const WorldConfig& cfg, uint64_t seed);

std::string world_to_json(const World& w);
World world_from_json(const std::string& text);

std::string trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const std::string& text);

}  // namespace ipr::sim
