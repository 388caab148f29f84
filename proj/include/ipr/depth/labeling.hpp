#pragma once

#include <string>
#include <vector>

#include "ipr/depth/stereo.hpp"

namespace ipr::depth {

// Sign convention: error = estimated - reference. Negative beyond alpha
// means the estimate is too close (false positive, phantom obstacle),
// positive beyond alpha too far (false negative, missed obstacle). Accurate
// estimates split into TP (obstacle within range, true_depth <= r_max) and
// TN. Throws std::domain_error for |error| >= r_max.
FailureLabel classify_error(double error_m, double alpha, double true_depth, double r_max);

struct LabeledCell {
  ContextFeatures context;
  double error_m = 0.0;
  FailureLabel label = FailureLabel::kTP;
  int frame_id = 0;
};

// Cross-sensor labeling of a frame: per cell with a valid estimate and a
// valid supervisory reference, compute the error and classify. Invalid and
// sentinel cells are skipped.
std::vector<LabeledCell> label_depth_frame(const DepthFrame& frame, double alpha,
                                           double r_max);

// CSV: frame_id,ctx_0..ctx_{D-1},error_m,label
std::string labeled_cells_to_csv(const std::vector<LabeledCell>& cells);
std::vector<LabeledCell> labeled_cells_from_csv(const std::string& csv);

}  // namespace ipr::depth
