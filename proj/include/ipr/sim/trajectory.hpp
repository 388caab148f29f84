#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipr/core/pose.hpp"

namespace ipr::sim {

// Camera trajectory: one camera-to-world pose per frame, strictly increasing
// frame indices. Camera convention: +Z optical axis along the direction of
// travel, +X right, +Y down.
struct Trajectory {
  std::vector<int> frame_ids;
  std::vector<ipr::Pose3> poses;
  double frame_rate = 10.0;

  size_t size() const { return poses.size(); }
  void validate() const;  // throws on invariant violation
};

enum class TrajectoryPreset { kStraight, kGentle, kHighTurnRate };

std::string to_string(TrajectoryPreset p);
TrajectoryPreset trajectory_preset_from_string(const std::string& s);

struct TrajectoryConfig {
  int n_frames = 64;
  double frame_rate = 10.0;
  double speed = 1.2;  // meters per frame
  TrajectoryPreset preset = TrajectoryPreset::kGentle;
  double turn_scale = 1.0;  // multiplies the preset turn rate
};

// Smooth seeded path: heading integrates a band-limited turn-rate signal
// (sum of seeded sinusoids), position integrates the heading at constant
// speed, with a mild vertical bob. Deterministic for a fixed seed.
Trajectory generate_trajectory(const TrajectoryConfig& cfg, uint64_t seed);

double path_length(const Trajectory& t);

// Cumulative path length at each frame, starting at 0.
std::vector<double> cumulative_lengths(const Trajectory& t);

}  // namespace ipr::sim
