#pragma once

#include <vector>

#include "ipr/introspect/model.hpp"
#include "ipr/slam/track.hpp"

namespace ipr::slam {

struct BAResult {
  std::vector<Pose3> poses;
  std::vector<Eigen::Vector3d> points;  // one per track, optimized
  double final_cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;  // accepted-step costs, non-increasing
  bool converged = false;
  bool rank_warning = false;
  int dropped_residuals = 0;  // behind-camera drops over all iterations
};

// Full-batch bundle adjustment: Levenberg-Marquardt on
//   sum_i rho_theta_i( r_i^T Sigma_i^-1 r_i ),  Sigma_i = scale_sigma^2 I,
// with iteratively reweighted residuals (weight = drho/dx) and a Schur
// complement on the point blocks. Poses [0, num_fixed_poses) stay fixed.
BAResult ba_solve(const BAProblem& problem);

// theta = theta_from_cost(model(context), theta_max) per observation.
void assign_thetas(std::vector<Track>& tracks, const introspect::IntrospectionModel& model,
                   double theta_max);

// Baseline: the same constant parameter everywhere (theta_max / 3, the
// midpoint cost c = 0.5 of the adaptive map).
void assign_constant_theta(std::vector<Track>& tracks, double theta_max);

// Observations whose squared weighted residual stays within theta^2 count
// as inliers; returns the per-frame inlier count under the solved geometry.
std::vector<int> frame_inlier_counts(const BAProblem& problem, const BAResult& result);

// Frames whose inlier count drops below n_min, mirroring tracking loss from
// insufficient feature matches.
std::vector<int> tracking_failures(const std::vector<int>& inlier_counts, int n_min);

}  // namespace ipr::slam
