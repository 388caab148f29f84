#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipr/core/error_dist.hpp"
#include "ipr/core/types.hpp"
#include "ipr/introspect/mlp.hpp"

namespace ipr::introspect {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 150;
  int batch_size = 32;
  uint64_t seed = 1;
  double e_max = 10.0;      // error-magnitude normalization cap (px or m)
  double theta_max = 5.99;  // upper end of the Huber parameter range
  double val_fraction = 0.2;

  void validate() const;
};

struct RegressionSample {
  ContextFeatures context;
  double target = 0.0;  // normalized cost in [0,1]
};

struct ClassSample {
  ContextFeatures context;
  FailureLabel label = FailureLabel::kTP;
};

// Trained introspection function. A Regressor maps context to normalized
// error magnitude in [0,1]; a Classifier to <p_FP, p_FN, p_TP, p_TN>; a
// Binned model is a per-region-class empirical mean used as a cheap
// reference predictor.
class IntrospectionModel {
 public:
  enum class Kind { kRegressor, kClassifier, kBinned };

  Kind kind() const { return kind_; }
  const Mlp& net() const { return net_; }
  const std::vector<double>& train_loss() const { return train_loss_; }
  const std::vector<double>& val_loss() const { return val_loss_; }

  double predict_cost(const ContextFeatures& ctx) const;      // regressor / binned
  Eigen::Vector4d predict_probs(const ContextFeatures& ctx) const;  // classifier
  // p(failure) = p_FP + p_FN
  double predict_failure_prob(const ContextFeatures& ctx) const;

  std::string to_json() const;
  static IntrospectionModel from_json(const std::string& text);
  std::string loss_history_csv() const;

  static IntrospectionModel make_regressor(Mlp net, std::vector<double> train_loss,
                                           std::vector<double> val_loss);
  static IntrospectionModel make_classifier(Mlp net, std::vector<double> train_loss,
                                            std::vector<double> val_loss);
  static IntrospectionModel make_binned(std::vector<double> bin_means);

 private:
  Kind kind_ = Kind::kRegressor;
  Mlp net_;
  std::vector<double> bin_means_;  // per region class
  std::vector<double> train_loss_;
  std::vector<double> val_loss_;
};

// min(magnitude, e_max) / e_max.
double normalize_error(double magnitude, double e_max);

// theta = (1 - c) / (1 + c) * theta_max; strictly decreasing in c.
// Throws std::invalid_argument for c outside [0,1].
double theta_from_cost(double c, double theta_max);

// Piecewise density from classifier head probabilities:
//   theta_fp = p_fp / (r_max - alpha), theta_fn = p_fn / (r_max - alpha),
//   theta_t = (p_tp + p_tn) / (2 alpha).
PiecewiseDist piecewise_from_probs(double p_fp, double p_fn, double p_tp, double p_tn,
                                   double alpha, double r_max);

struct NllResult {
  double value = 0.0;
  int clamped = 0;  // samples hit by the 1e-12 density floor
};

// Mean negative log likelihood of scalar error samples under a distribution.
NllResult nll(const ParametricErrorDist& dist, const std::vector<double>& samples);

// MSE on normalized targets; a sigmoid head keeps the output in [0,1].
// Deterministic per cfg.seed. Throws std::invalid_argument on an empty
// dataset.
IntrospectionModel train_regressor(const std::vector<RegressionSample>& dataset,
                                   const TrainConfig& cfg);

// Cross-entropy on the four failure classes.
IntrospectionModel train_classifier(const std::vector<ClassSample>& dataset,
                                    const TrainConfig& cfg);

IntrospectionModel train_binned(const std::vector<RegressionSample>& dataset);

}  // namespace ipr::introspect
