#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ipr/core/types.hpp"
#include "ipr/introspect/mlp.hpp"
#include "ipr/introspect/model.hpp"

namespace ipr::baselines {

struct EnsembleSpec {
  enum class Mode { kRetrain, kDropout };

  int n_members = 3;
  double member_sigma2 = 1e-4;  // per-member output variance hyperparameter
  uint64_t perturb_seed = 0;
  bool calibrated = false;
  Mode mode = Mode::kRetrain;
  double dropout_p = 0.2;  // hidden-unit drop probability (dropout mode)
};

// Mixture moments of N equal-weight Gaussians N(mu_i, sigma2):
//   mu_ens  = mean(mu_i)
//   s2_ens  = mean(sigma2 + mu_i^2) - mu_ens^2
// Throws std::invalid_argument on an empty ensemble.
std::pair<double, double> ensemble_moments(const std::vector<double>& member_means,
                                           double sigma2);

// P(|e| > threshold) for e ~ N(0, sigma_ens^2):
//   p = 1 - erf(threshold / (sqrt(2) sigma_ens)).
double failure_prob(double sigma_ens, double failure_threshold);

// Training sample for the depth-correction regressor: context -> observed
// depth error in meters.
struct ErrorRegressionSample {
  ContextFeatures context;
  double error_m = 0.0;
};

using MemberTrainer =
    std::function<introspect::Mlp(const std::vector<ErrorRegressionSample>&, uint64_t seed)>;

// Approximate-Bayesian uncertainty baseline around the depth estimator.
// Retrain mode: n_members independently seeded trainings on bootstrap
// resamples. Dropout mode: one training; each member is a fixed stochastic
// mask of the hidden units (drop probability dropout_p, survivors scaled by
// 1/(1 - dropout_p)) sampled from a distinct seed.
class DepthErrorEnsemble {
 public:
  static DepthErrorEnsemble build(const MemberTrainer& trainer, const EnsembleSpec& spec,
                                  const std::vector<ErrorRegressionSample>& dataset);

  std::vector<double> member_means(const ContextFeatures& ctx) const;
  double predict_failure_prob(const ContextFeatures& ctx, double threshold) const;

  double sigma2() const { return sigma2_; }
  void set_sigma2(double s2) { sigma2_ = s2; }
  int n_members() const { return spec_.n_members; }
  const introspect::Mlp& member_net(int i) const;
  size_t param_bytes() const;

 private:
  EnsembleSpec spec_;
  double sigma2_ = 1e-4;
  std::vector<introspect::Mlp> nets_;  // n_members (retrain) or 1 (dropout)
  std::vector<std::vector<Eigen::VectorXd>> masks_;  // dropout: per member, per layer
};

// Member trainer backed by the in-house MLP (linear output head, layer
// sizes {D_ctx, 16, 16, 1}).
MemberTrainer make_correction_trainer(const introspect::TrainConfig& cfg);

// Tune sigma2 by minimizing the Gaussian-mixture NLL of observed errors:
//   NLL(s2) = -mean_j log( 1/N sum_i Normal(e_j; mu_ij, s2) )
// over log10 s2 in [-6, 2]: a coarse grid scan brackets the minimum, then
// golden-section search refines it. Deterministic.
double calibrate_sigma2(const std::vector<std::vector<double>>& member_preds,
                        const std::vector<double>& observed_errors);

double mixture_nll(const std::vector<std::vector<double>>& member_preds,
                   const std::vector<double>& observed_errors, double sigma2);

}  // namespace ipr::baselines
