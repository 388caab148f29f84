#pragma once

#include "ipr/cli/config.hpp"
#include "ipr/cli/report.hpp"
#include "ipr/introspect/model.hpp"
#include "ipr/slam/ba.hpp"

namespace ipr::cli {

// Pieces of one seeded run, exposed so tests and the acceptance suite can
// drive stages individually.
struct SlamSession {
  sim::World world;
  sim::Trajectory trajectory;
  std::vector<std::vector<sim::Observation>> observations;  // per frame
};

SlamSession make_session(const ExperimentConfig& cfg, uint64_t seed, uint64_t session_tag);

// Train an introspection regressor from a labeled session: per-frame GP
// cost-maps over the collected reprojection-error samples, mask-filtered
// targets, then MSE training on (context -> cost).
introspect::IntrospectionModel train_slam_introspector(const ExperimentConfig& cfg,
                                                       const SlamSession& train_session,
                                                       uint64_t seed);

// Bundle-adjustment problem over a test session: poses initialized from
// perturbed ground truth (first two exact, fixing gauge and scale), tracks
// grouped by landmark with ground-truth association.
slam::BAProblem build_ba_problem(const ExperimentConfig& cfg, const SlamSession& session,
                                 uint64_t seed);

struct SlamSeedOutcome {
  SlamRow adaptive;
  SlamRow constant;
  SortingRow sorting;
  slam::SortingCurve curve;
  std::string error;  // nonempty if the run failed
};

SlamSeedOutcome run_slam_seed(const ExperimentConfig& cfg, uint64_t seed);

// Full experiment over cfg.seeds (parallel across seeds, deterministic).
SlamReport run_slam_experiment(const ExperimentConfig& cfg);

}  // namespace ipr::cli
