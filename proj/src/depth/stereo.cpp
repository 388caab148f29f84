#include "ipr/depth/stereo.hpp"

#include <cmath>
#include <unordered_map>

#include "ipr/core/rng.hpp"

namespace ipr::depth {

double StereoCorruption::bias_at(RegionClass c, double depth) const {
  const int i = static_cast<int>(c);
  if (onset_depth_m[i] <= 0.0) return bias_m[i];
  const double w = std::max(1e-6, onset_width_m[i]);
  return bias_m[i] / (1.0 + std::exp(-(depth - onset_depth_m[i]) / w));
}

StereoObservations observe_stereo(const sim::World& world, const Pose3& pose,
                                  const CameraIntrinsics& intr,
                                  const sim::NoiseProfile& noise, uint64_t seed) {
  StereoObservations out;
  out.left = sim::observe_features(world, pose, intr, noise, Rng::derive(seed, 0x4c));
  Pose3 right_pose = pose;
  right_pose.translation += pose.rotation * Eigen::Vector3d(intr.baseline, 0.0, 0.0);
  out.right = sim::observe_features(world, right_pose, intr, noise, Rng::derive(seed, 0x52));
  return out;
}

DepthFrame stereo_depth(const std::vector<sim::Observation>& left,
                        const std::vector<sim::Observation>& right,
                        const CameraIntrinsics& intr, double r_max,
                        const StereoCorruption& corruption, uint64_t seed, int frame_id) {
  intr.validate();
  DepthFrame frame;
  frame.frame_id = frame_id;
  frame.width = intr.width;
  frame.height = intr.height;
  frame.r_max = r_max;

  std::unordered_map<int, const sim::Observation*> right_by_id;
  for (const auto& r : right) right_by_id[r.landmark_id] = &r;

  Rng rng(Rng::derive(seed, 0x646570));
  for (const auto& l : left) {
    const auto it = right_by_id.find(l.landmark_id);
    if (it == right_by_id.end()) continue;
    DepthCell cell;
    cell.landmark_id = l.landmark_id;
    cell.pixel = l.pixel;
    cell.context = l.context;
    const double disparity = l.pixel.x() - it->second->pixel.x();
    if (disparity > 0.0) {
      double d = intr.fx * intr.baseline / disparity;
      const RegionClass c = l.context.region();
      const int ci = static_cast<int>(c);
      d += corruption.bias_at(c, d);
      if (corruption.sigma_m[ci] > 0.0) d += rng.normal(0.0, corruption.sigma_m[ci]);
      if (d > 0.0 && d <= r_max) {
        cell.estimated = d;
        cell.valid_estimate = true;
      }
    }
    frame.cells.push_back(std::move(cell));
  }
  return frame;
}

void fill_reference(DepthFrame& frame, const Eigen::MatrixXd& supervisory_image) {
  for (auto& cell : frame.cells) {
    const int u = static_cast<int>(std::lround(cell.pixel.x()));
    const int v = static_cast<int>(std::lround(cell.pixel.y()));
    if (v < 0 || v >= supervisory_image.rows() || u < 0 || u >= supervisory_image.cols())
      continue;
    const double d = supervisory_image(v, u);
    if (d > 0.0 && d < frame.r_max) {
      cell.reference = d;
      cell.valid_reference = true;
    }
  }
}

}  // namespace ipr::depth
