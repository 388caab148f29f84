#include "ipr/depth/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace ipr::depth {

FailureMetrics failure_metrics(const std::vector<double>& predicted_p_failure,
                               const std::vector<FailureLabel>& labels) {
  if (predicted_p_failure.size() != labels.size() || labels.empty())
    throw std::invalid_argument("failure_metrics: size mismatch or empty input");

  int tp = 0, fp = 0, fn = 0;
  double nll = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const double p = predicted_p_failure[i];
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("failure_metrics: probability outside [0,1]");
    const bool truth = labels[i] == FailureLabel::kFP || labels[i] == FailureLabel::kFN;
    const bool pred = p > 0.5;
    if (pred && truth) ++tp;
    if (pred && !truth) ++fp;
    if (!pred && truth) ++fn;
    const double p_true = truth ? p : 1.0 - p;
    nll -= std::log(std::max(p_true, 1e-12));
  }

  FailureMetrics m;
  m.nll = nll / static_cast<double>(labels.size());
  if (tp + fp == 0) {
    m.degenerate_precision = true;
    m.precision = 0.0;
  } else {
    m.precision = static_cast<double>(tp) / (tp + fp);
  }
  m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace ipr::depth
