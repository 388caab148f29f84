#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ipr/sim/trajectory.hpp"

namespace ipr::slam {

struct RpeResult {
  double trans_err_pct = 0.0;     // RMSE of per-pair drift, percent of distance
  double rot_err_deg_per_m = 0.0; // RMSE of per-pair rotation drift, deg/m
  int n_pairs = 0;
};

// Relative pose error over frame pairs ~d meters apart (the first frame j
// whose reference path distance from i reaches d). Pairs touching any frame
// listed in `exclude_frames` are skipped, matching the convention that RPE
// is only computed where tracking survived. Throws std::invalid_argument if
// the trajectories disagree or are shorter than d.
RpeResult rpe(const sim::Trajectory& estimated, const sim::Trajectory& reference,
              double d_meters, const std::vector<int>& exclude_frames = {});

struct MdbfResult {
  double meters = 0.0;
  bool no_failures = false;  // value is the full path length, a lower bound
};

// Mean distance between failures: reference path length / (failures + 1).
MdbfResult mdbf(const std::vector<int>& failure_frames, const sim::Trajectory& reference);

struct SortingCurve {
  std::vector<double> top_fraction;  // grid of top-x fractions (0,1]
  std::vector<double> ideal;        // mean true magnitude, sorted by truth
  std::vector<double> predicted;    // sorted by predicted cost
  std::vector<double> random;       // averaged over `trials` shuffles
  std::vector<double> random_std;   // spread of the shuffle distribution
  double area_ideal = 0.0;
  double area_predicted = 0.0;
  double area_random = 0.0;
};

// Mean true error magnitude of the top x% of features under three orderings
// (ground truth, predicted score, random baseline). `scored` holds
// (predicted cost, true magnitude) pairs; needs >= 10 of them.
SortingCurve sorting_curve(const std::vector<std::pair<double, double>>& scored, int trials,
                           uint64_t seed);

}  // namespace ipr::slam
