#pragma once

#include <vector>

#include "ipr/core/types.hpp"

namespace ipr::depth {

struct FailureMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double nll = 0.0;
  bool degenerate_precision = false;  // no positive predictions; reported as 0
};

// Binary failure prediction metrics. Ground truth failure = label in
// {FP, FN}; predicted failure = p > 0.5. NLL is the mean negative log of
// the probability assigned to the true binary outcome, clamped at 1e-12.
FailureMetrics failure_metrics(const std::vector<double>& predicted_p_failure,
                               const std::vector<FailureLabel>& labels);

}  // namespace ipr::depth
