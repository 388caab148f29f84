#pragma once

#include "ipr/baselines/ensemble.hpp"
#include "ipr/cli/config.hpp"
#include "ipr/cli/report.hpp"
#include "ipr/depth/labeling.hpp"

namespace ipr::cli {

// Labeled depth cells of one deployment session (several frames of stereo
// estimation checked against the supervisory sensor).
struct DepthSession {
  std::vector<depth::LabeledCell> cells;
};

DepthSession make_depth_session(const ExperimentConfig& cfg, const WorldParams& world,
                                const sim::NoiseProfile& noise,
                                const depth::StereoCorruption& corruption, int n_frames,
                                uint64_t seed);

// Everything trained on one seed's training session.
struct DepthMethodBundle {
  introspect::IntrospectionModel ipr;
  std::vector<introspect::IntrospectionModel> ipr_members;  // ipr-ensemble
  baselines::DepthErrorEnsemble ensemble;
  double ensemble_sigma2_calibrated = 0.0;
  baselines::DepthErrorEnsemble mcdropout;
  double mcdropout_sigma2_calibrated = 0.0;
};

DepthMethodBundle train_depth_methods(const ExperimentConfig& cfg,
                                      const DepthSession& train_session, uint64_t seed);

// Failure probabilities of one method over a list of cells. Known methods:
// ipr, ipr-ensemble, ensemble, ensemble-uncalib, mcdropout,
// mcdropout-uncalib.
std::vector<double> predict_failure_probs(const DepthMethodBundle& bundle,
                                          const std::string& method,
                                          const std::vector<depth::LabeledCell>& cells,
                                          const ExperimentConfig& cfg);

struct DepthSeedOutcome {
  std::vector<DepthRow> rows;
  std::string error;
};

DepthSeedOutcome run_depth_seed(const ExperimentConfig& cfg, uint64_t seed);

DepthReport run_depth_experiment(const ExperimentConfig& cfg);

}  // namespace ipr::cli
