#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ipr/core/types.hpp"
#include "ipr/sim/sensors.hpp"

namespace ipr::depth {

// One labeled location in a depth frame. Cells sit at projected landmark
// locations (the estimator under test is sparse feature-based stereo);
// elsewhere the frame implicitly carries the r_max sentinel.
struct DepthCell {
  int landmark_id = -1;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double estimated = 0.0;   // meters
  double reference = 0.0;   // meters, from the supervisory sensor
  bool valid_estimate = false;
  bool valid_reference = false;
  ContextFeatures context;
};

struct DepthFrame {
  int frame_id = 0;
  int width = 0;
  int height = 0;
  double r_max = 10.0;
  std::vector<DepthCell> cells;
};

// Per-region-class corruption of the matcher: a planted depth bias and
// additional matching noise, both in meters. Models systematic mismatches
// (e.g. mirror-image matches on reflective surfaces). When onset_depth_m is
// positive the bias fades in with range, bias * sigmoid((z - onset)/width):
// close-by surfaces match fine, distant ones fail.
struct StereoCorruption {
  std::array<double, kNumRegionClasses> bias_m = {0, 0, 0, 0};
  std::array<double, kNumRegionClasses> sigma_m = {0, 0, 0, 0};
  std::array<double, kNumRegionClasses> onset_depth_m = {0, 0, 0, 0};
  std::array<double, kNumRegionClasses> onset_width_m = {0.3, 0.3, 0.3, 0.3};

  double bias_at(RegionClass c, double depth) const;
};

// Triangulate matched left/right feature observations: depth = fx * b / d
// with disparity d = u_L - u_R. Cells with non-positive disparity or depth
// beyond r_max are marked invalid. Corruption is applied per the cell's
// region class.
DepthFrame stereo_depth(const std::vector<sim::Observation>& left,
                        const std::vector<sim::Observation>& right,
                        const CameraIntrinsics& intr, double r_max,
                        const StereoCorruption& corruption, uint64_t seed, int frame_id = 0);

// Sample the supervisory depth image at each cell; r_max sentinel readings
// leave the reference invalid.
void fill_reference(DepthFrame& frame, const Eigen::MatrixXd& supervisory_image);

// Convenience: left/right observations of a stereo rig at `pose` (right
// camera displaced by the baseline along camera +X).
struct StereoObservations {
  std::vector<sim::Observation> left;
  std::vector<sim::Observation> right;
};
StereoObservations observe_stereo(const sim::World& world, const Pose3& pose,
                                  const CameraIntrinsics& intr,
                                  const sim::NoiseProfile& noise, uint64_t seed);

}  // namespace ipr::depth
