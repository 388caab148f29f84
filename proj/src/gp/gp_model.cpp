#include "ipr/gp/gp_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ipr::gp {

double se_kernel(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const GpKernel& k) {
  return k.sigma_f2 * std::exp(-(a - b).squaredNorm() / (2.0 * k.length * k.length));
}

GpModel GpModel::fit(const std::vector<Eigen::Vector2d>& inputs,
                     const std::vector<double>& targets, const GpKernel& kernel) {
  if (inputs.empty()) throw std::invalid_argument("GpModel::fit: need at least one sample");
  if (inputs.size() != targets.size())
    throw std::invalid_argument("GpModel::fit: inputs/targets size mismatch");
  if (!(kernel.sigma_f2 > 0.0) || !(kernel.length > 0.0) || !(kernel.sigma_n2 >= 0.0))
    throw std::invalid_argument("GpModel::fit: kernel parameters must be positive");

  const int n = static_cast<int>(inputs.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = se_kernel(inputs[i], inputs[j], kernel);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  gram.diagonal().array() += kernel.sigma_n2;

  GpModel m;
  m.mean_shift_ = 0.0;
  for (double t : targets) m.mean_shift_ += t;
  m.mean_shift_ /= n;

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = targets[i] - m.mean_shift_;

  m.llt_.compute(gram);
  if (m.llt_.info() != Eigen::Success)
    throw std::runtime_error("GpModel::fit: singular system (duplicate inputs with zero noise?)");
  m.alpha_ = m.llt_.solve(y);
  m.inputs_ = inputs;
  m.kernel_ = kernel;
  return m;
}

GpPrediction GpModel::predict(const Eigen::Vector2d& query) const {
  const int n = size();
  Eigen::VectorXd ks(n);
  for (int i = 0; i < n; ++i) ks(i) = se_kernel(query, inputs_[i], kernel_);
  GpPrediction p;
  p.mean = mean_shift_ + ks.dot(alpha_);
  p.var = kernel_.sigma_f2 - ks.dot(llt_.solve(ks));
  if (p.var < 0.0) p.var = 0.0;
  return p;
}

}  // namespace ipr::gp
