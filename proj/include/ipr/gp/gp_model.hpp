#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

namespace ipr::gp {

struct GpKernel {
  double sigma_f2 = 0.25;  // signal variance
  double length = 40.0;    // lengthscale, pixels
  double sigma_n2 = 0.01;  // observation noise variance
};

struct GpPrediction {
  double mean = 0.0;
  double var = 0.0;
};

// Exact GP regression with a squared-exponential kernel
//   k(a, b) = sigma_f2 * exp(-|a - b|^2 / (2 l^2)).
// Targets are shifted to zero mean internally; the shift acts as the prior
// mean far away from the data. Immutable after fit.
class GpModel {
 public:
  // Throws std::invalid_argument on empty input or non-positive kernel
  // parameters, std::runtime_error if (K + sigma_n2 I) is not positive
  // definite (e.g. duplicate inputs with zero noise).
  static GpModel fit(const std::vector<Eigen::Vector2d>& inputs,
                     const std::vector<double>& targets, const GpKernel& kernel);

  GpPrediction predict(const Eigen::Vector2d& query) const;

  const GpKernel& kernel() const { return kernel_; }
  int size() const { return static_cast<int>(inputs_.size()); }
  double prior_mean() const { return mean_shift_; }

 private:
  GpModel() = default;

  std::vector<Eigen::Vector2d> inputs_;
  Eigen::VectorXd alpha_;      // (K + sigma_n2 I)^-1 (y - mean)
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double mean_shift_ = 0.0;
  GpKernel kernel_;
};

double se_kernel(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const GpKernel& k);

}  // namespace ipr::gp
