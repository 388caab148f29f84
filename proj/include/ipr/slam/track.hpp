#pragma once

#include <vector>

#include "ipr/core/pose.hpp"
#include "ipr/core/types.hpp"

namespace ipr::slam {

struct TrackObservation {
  int frame_index = 0;  // index into BAProblem::poses
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double scale_sigma = 1.0;  // pixel sigma from the extraction scale
  ContextFeatures context;
  double theta = 0.0;  // per-observation Huber parameter
};

// One landmark with all its observations across frames.
struct Track {
  int landmark_id = -1;
  Eigen::Vector3d map_point_estimate = Eigen::Vector3d::Zero();
  std::vector<TrackObservation> observations;
};

struct SolverOptions {
  int max_iters = 50;
  double lm_lambda0 = 1e-4;
  double tol_grad = 1e-10;
  double tol_step = 1e-12;
};

struct BAProblem {
  std::vector<Pose3> poses;  // initial trajectory estimate, camera-to-world
  std::vector<Track> tracks;
  CameraIntrinsics intr;
  SolverOptions solver;
  // Poses [0, num_fixed_poses) are held constant. Two are fixed by default:
  // the first pins the frame, the second pins the free monocular scale.
  int num_fixed_poses = 2;

  void validate() const;
};

}  // namespace ipr::slam
