#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ipr/core/pose.hpp"
#include "ipr/core/types.hpp"
#include "ipr/sim/sensors.hpp"
#include "ipr/sim/trajectory.hpp"
#include "ipr/sim/world.hpp"

namespace ipr::labeler {

// Posterior estimate of a tracked feature at an earlier frame, as produced
// by an incremental back-end after more evidence has arrived.
struct PosteriorTrackState {
  Eigen::Vector2d feature_pixel_posterior = Eigen::Vector2d::Zero();
  double depth_posterior = 1.0;          // meters, > 0
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();  // pixel covariance, SPD

  void validate() const;
};

struct GateConfig {
  double alpha_sig = 0.05;  // significance level in (0,1)
  int dof = 6;
};

// Accept iff mahalanobis_sq <= chi2-quantile(1 - alpha_sig, dof).
bool chi2_gate(double mahalanobis_sq, const GateConfig& cfg);

// Error sample from agreement with a high-fidelity supervisory estimate.
// Returns nullopt when the supervisory value carries the sentinel (no
// reading) -- samples are skipped, never fabricated.
std::optional<ErrorSample> label_cross_sensor(const Eigen::VectorXd& primary_estimate,
                                              const Eigen::VectorXd& supervisory_estimate,
                                              const ContextFeatures& context, int frame_id,
                                              std::optional<double> sentinel = std::nullopt);

// Error sample from spatio-temporal consistency: transport the posterior
// feature estimate from frame t - dt into the current frame through the
// (gate-approved) relative pose estimate, reproject, and compare with the
// current measurement. Returns nullopt if the transported point lands
// behind the camera.
std::optional<ErrorSample> label_spatio_temporal(const Eigen::Vector2d& obs_now,
                                                 const PosteriorTrackState& posterior,
                                                 const Pose3& relpose_est,
                                                 const CameraIntrinsics& intr,
                                                 const ContextFeatures& context, int frame_id);

struct CollectConfig {
  sim::NoiseProfile noise;
  CameraIntrinsics intr;
  GateConfig gate;
  int delta_t = 10;                // posterior lag, frames
  double posterior_sigma_px = 0.1; // posterior feature perturbation
  double posterior_sigma_m = 0.02; // posterior depth perturbation
  double vo_sigma_t = 0.01;        // relative-pose estimate perturbation (m / rad)
  double vo_sigma_r = 0.002;
  double sup_sigma_t = 0.01;       // supervisory pose perturbation (m / rad)
  double sup_sigma_r = 0.002;
  double sup_sigma_px = 0.05;      // supervisory pixel estimate noise
  bool emit_cross_sensor = true;
  bool emit_spatio_temporal = true;
};

// Run both labelers over all frames of a trajectory. The pose supervision is
// simulator ground truth perturbed per the config; spatio-temporal labeling
// only proceeds on frames whose relative-pose estimate passes the chi-square
// gate against the supervisory pose. Output is frame-sorted and
// deterministic per seed.
std::vector<ErrorSample> collect_dataset(const sim::World& world,
                                         const sim::Trajectory& trajectory,
                                         const CollectConfig& cfg, uint64_t seed);

}  // namespace ipr::labeler
