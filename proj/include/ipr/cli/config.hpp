#pragma once

#include <string>
#include <vector>

#include "ipr/depth/stereo.hpp"
#include "ipr/gp/gp_model.hpp"
#include "ipr/introspect/model.hpp"
#include "ipr/labeler/labeler.hpp"
#include "ipr/sim/sensors.hpp"
#include "ipr/sim/trajectory.hpp"
#include "ipr/sim/world.hpp"
#include "ipr/slam/track.hpp"

namespace ipr::cli {

// World parameters minus the corridor, which the experiment runner derives
// from the generated trajectory.
struct WorldParams {
  int n_landmarks = 260;
  std::array<double, kNumRegionClasses> region_mix = {1.0, 0.0, 0.0, 0.0};
  double lateral = 9.0;
  double vertical = 2.5;
  double depth_min = 4.0;
  double depth_max = 26.0;
  std::array<double, kNumRegionClasses> class_depth_min = {0, 0, 0, 0};
  std::array<double, kNumRegionClasses> class_depth_max = {0, 0, 0, 0};
  bool cluster_degraded = false;
  double disc_radius = 0.35;

  sim::WorldConfig to_world_config(std::vector<Pose3> corridor) const;
};

struct GpParams {
  gp::GpKernel kernel;
  double tau_var = 0.125;  // mask threshold on the posterior variance
  int stride = 8;
};

struct SlamParams {
  int n_min_inliers = 15;       // tracking-failure threshold per frame
  double rpe_distance = 4.0;    // evaluation pair distance, meters
  double init_sigma_t = 0.05;   // initial pose perturbation, meters
  double init_sigma_rot_deg = 1.0;
  double init_sigma_point = 0.05;
  int sorting_trials = 200;
};

struct DepthParams {
  double alpha = 1.0;
  double r_max = 10.0;
  double sup_sigma = 0.05;  // supervisory depth sensor noise
  int n_frames_train = 30;
  int n_frames_test = 20;
  depth::StereoCorruption corruption;
};

struct EnsembleParams {
  int n_members = 3;
  double sigma2_uncalib = 1e-4;
  double dropout_p = 0.2;
  int member_epochs = 12;
  double member_lr = 0.05;
};

struct ExperimentConfig {
  WorldParams world;
  sim::NoiseProfile noise;
  CameraIntrinsics intr;
  sim::TrajectoryConfig trajectory;
  labeler::CollectConfig labeler_cfg;  // intr/noise filled from above on use
  GpParams gp;
  introspect::TrainConfig train;
  slam::SolverOptions solver;
  SlamParams slam;
  DepthParams depth;
  // out-of-distribution overrides for the depth experiment
  WorldParams ood_world;
  sim::NoiseProfile ood_noise;
  depth::StereoCorruption ood_corruption;
  EnsembleParams ensemble;
  std::vector<std::string> methods;
  std::vector<uint64_t> seeds;
  std::string out_dir = "out";

  void validate() const;
};

// Presets. `slam_challenge` is the default SLAM evaluation scene: 20%
// degraded-context landmarks clustered along a high-turn-rate path, with
// planted outliers. `depth_default` is the stereo failure-prediction scene
// with an in-distribution and an out-of-distribution variant.
ExperimentConfig slam_challenge_config();
ExperimentConfig slam_trivial_config();
ExperimentConfig depth_default_config();

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

// Apply `--set dotted.path=value` overrides on the JSON form of a config.
ExperimentConfig apply_overrides(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& overrides);

}  // namespace ipr::cli
