#include "ipr/sim/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "ipr/core/rng.hpp"

namespace ipr::sim {

void Trajectory::validate() const {
  if (frame_ids.size() != poses.size())
    throw std::invalid_argument("Trajectory: frame_ids/poses size mismatch");
  for (size_t i = 1; i < frame_ids.size(); ++i) {
    if (frame_ids[i] <= frame_ids[i - 1])
      throw std::invalid_argument("Trajectory: frame indices not strictly increasing");
    if ((poses[i].translation - poses[i - 1].translation).norm() >= 5.0)
      throw std::invalid_argument("Trajectory: consecutive translation >= 5 m");
  }
}

std::string to_string(TrajectoryPreset p) {
  switch (p) {
    case TrajectoryPreset::kStraight: return "straight";
    case TrajectoryPreset::kGentle: return "gentle";
    case TrajectoryPreset::kHighTurnRate: return "high_turn";
  }
  throw std::invalid_argument("unknown trajectory preset");
}

TrajectoryPreset trajectory_preset_from_string(const std::string& s) {
  if (s == "straight") return TrajectoryPreset::kStraight;
  if (s == "gentle") return TrajectoryPreset::kGentle;
  if (s == "high_turn") return TrajectoryPreset::kHighTurnRate;
  throw std::invalid_argument("unknown trajectory preset: " + s);
}

namespace {

// Rotation taking the camera frame (+Z forward, +Y down) to the world frame
// for a given yaw about world +Z.
Eigen::Quaterniond heading_to_rotation(double yaw) {
  const Eigen::Vector3d fwd(std::cos(yaw), std::sin(yaw), 0.0);
  const Eigen::Vector3d down(0.0, 0.0, -1.0);
  const Eigen::Vector3d right = down.cross(fwd);
  Eigen::Matrix3d r;
  r.col(0) = right;
  r.col(1) = down;
  r.col(2) = fwd;
  return Eigen::Quaterniond(r);
}

}  // namespace

Trajectory generate_trajectory(const TrajectoryConfig& cfg, uint64_t seed) {
  if (cfg.n_frames < 2) throw std::invalid_argument("generate_trajectory: n_frames >= 2");
  if (!(cfg.speed > 0.0) || cfg.speed >= 5.0)
    throw std::invalid_argument("generate_trajectory: speed in (0, 5) m/frame required");

  double amp = 0.0;  // peak turn rate, rad per frame
  switch (cfg.preset) {
    case TrajectoryPreset::kStraight: amp = 0.0; break;
    case TrajectoryPreset::kGentle: amp = 0.02; break;
    case TrajectoryPreset::kHighTurnRate: amp = 0.09; break;
  }
  amp *= cfg.turn_scale;

  Rng rng(Rng::derive(seed, 0x7261ca));
  const double p1 = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  const double p2 = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  const double f1 = rng.uniform(0.5, 1.0);
  const double f2 = rng.uniform(1.5, 2.5);

  Trajectory t;
  t.frame_rate = cfg.frame_rate;
  t.frame_ids.reserve(cfg.n_frames);
  t.poses.reserve(cfg.n_frames);

  double yaw = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  Eigen::Vector3d pos(0.0, 0.0, 1.2);
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int k = 0; k < cfg.n_frames; ++k) {
    t.frame_ids.push_back(k);
    t.poses.emplace_back(heading_to_rotation(yaw), pos);
    const double s = static_cast<double>(k) / cfg.n_frames;
    const double rate =
        amp * (0.6 * std::sin(two_pi * f1 * s + p1) + 0.4 * std::sin(two_pi * f2 * s + p2));
    yaw += rate;
    pos += cfg.speed * Eigen::Vector3d(std::cos(yaw), std::sin(yaw), 0.0);
    pos.z() = 1.2 + 0.05 * std::sin(two_pi * s + p1);
  }
  t.validate();
  return t;
}

double path_length(const Trajectory& t) {
  double len = 0.0;
  for (size_t i = 1; i < t.poses.size(); ++i)
    len += (t.poses[i].translation - t.poses[i - 1].translation).norm();
  return len;
}

std::vector<double> cumulative_lengths(const Trajectory& t) {
  std::vector<double> c(t.poses.size(), 0.0);
  for (size_t i = 1; i < t.poses.size(); ++i)
    c[i] = c[i - 1] + (t.poses[i].translation - t.poses[i - 1].translation).norm();
  return c;
}

}  // namespace ipr::sim
