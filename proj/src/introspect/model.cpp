#include "ipr/introspect/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ipr/core/io.hpp"
#include "ipr/core/rng.hpp"

namespace ipr::introspect {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || epochs < 1 || batch_size < 1 || !(e_max > 0.0) ||
      !(theta_max > 0.0) || val_fraction < 0.0 || val_fraction >= 1.0)
    throw std::invalid_argument("TrainConfig: invalid values");
}

double normalize_error(double magnitude, double e_max) {
  if (magnitude < 0.0) throw std::invalid_argument("normalize_error: magnitude >= 0");
  if (!(e_max > 0.0)) throw std::invalid_argument("normalize_error: e_max > 0");
  return std::min(magnitude, e_max) / e_max;
}

double theta_from_cost(double c, double theta_max) {
  if (c < 0.0 || c > 1.0) throw std::invalid_argument("theta_from_cost: c in [0,1] required");
  if (!(theta_max > 0.0)) throw std::invalid_argument("theta_from_cost: theta_max > 0");
  return (1.0 - c) / (1.0 + c) * theta_max;
}

PiecewiseDist piecewise_from_probs(double p_fp, double p_fn, double p_tp, double p_tn,
                                   double alpha, double r_max) {
  if (p_fp < 0.0 || p_fn < 0.0 || p_tp < 0.0 || p_tn < 0.0)
    throw std::invalid_argument("piecewise_from_probs: negative probability");
  if (std::fabs(p_fp + p_fn + p_tp + p_tn - 1.0) > 1e-6)
    throw std::invalid_argument("piecewise_from_probs: probabilities must sum to 1");
  if (!(alpha > 0.0) || !(r_max > alpha))
    throw std::invalid_argument("piecewise_from_probs: 0 < alpha < r_max required");
  PiecewiseDist d;
  d.alpha = alpha;
  d.r_max = r_max;
  d.theta_fp = p_fp / (r_max - alpha);
  d.theta_fn = p_fn / (r_max - alpha);
  d.theta_t = (p_tp + p_tn) / (2.0 * alpha);
  // renormalize the residual 1e-6 slack so the distribution invariant holds
  const double total = d.theta_fp * (r_max - alpha) + d.theta_t * 2.0 * alpha +
                       d.theta_fn * (r_max - alpha);
  d.theta_fp /= total;
  d.theta_t /= total;
  d.theta_fn /= total;
  return d;
}

NllResult nll(const ParametricErrorDist& dist, const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("nll: empty sample set");
  NllResult r;
  double total = 0.0;
  for (double x : samples) {
    double p = dist_pdf(dist, x);
    if (p < 1e-12) {
      p = 1e-12;
      ++r.clamped;
    }
    total -= std::log(p);
  }
  r.value = total / static_cast<double>(samples.size());
  return r;
}

double IntrospectionModel::predict_cost(const ContextFeatures& ctx) const {
  switch (kind_) {
    case Kind::kRegressor: return net_.forward(ctx.vec())(0);
    case Kind::kBinned: return bin_means_[static_cast<int>(ctx.region())];
    case Kind::kClassifier: return predict_failure_prob(ctx);
  }
  throw std::logic_error("unknown model kind");
}

Eigen::Vector4d IntrospectionModel::predict_probs(const ContextFeatures& ctx) const {
  if (kind_ != Kind::kClassifier)
    throw std::logic_error("predict_probs: not a classifier");
  return net_.forward(ctx.vec());
}

double IntrospectionModel::predict_failure_prob(const ContextFeatures& ctx) const {
  const Eigen::Vector4d p = predict_probs(ctx);
  return p(static_cast<int>(FailureLabel::kFP)) + p(static_cast<int>(FailureLabel::kFN));
}

IntrospectionModel IntrospectionModel::make_regressor(Mlp net, std::vector<double> train_loss,
                                                      std::vector<double> val_loss) {
  IntrospectionModel m;
  m.kind_ = Kind::kRegressor;
  m.net_ = std::move(net);
  m.train_loss_ = std::move(train_loss);
  m.val_loss_ = std::move(val_loss);
  return m;
}

IntrospectionModel IntrospectionModel::make_classifier(Mlp net, std::vector<double> train_loss,
                                                       std::vector<double> val_loss) {
  IntrospectionModel m = make_regressor(std::move(net), std::move(train_loss), std::move(val_loss));
  m.kind_ = Kind::kClassifier;
  return m;
}

IntrospectionModel IntrospectionModel::make_binned(std::vector<double> bin_means) {
  IntrospectionModel m;
  m.kind_ = Kind::kBinned;
  m.bin_means_ = std::move(bin_means);
  return m;
}

std::string IntrospectionModel::to_json() const {
  nlohmann::ordered_json j;
  switch (kind_) {
    case Kind::kRegressor: j["kind"] = "regressor"; break;
    case Kind::kClassifier: j["kind"] = "classifier"; break;
    case Kind::kBinned: j["kind"] = "binned"; break;
  }
  if (kind_ == Kind::kBinned) {
    j["bin_means"] = bin_means_;
  } else {
    j["net"] = nlohmann::json::parse(net_.to_json());
  }
  j["train_loss"] = train_loss_;
  j["val_loss"] = val_loss_;
  return j.dump();
}

IntrospectionModel IntrospectionModel::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind");
  IntrospectionModel m;
  if (kind == "binned") {
    m = make_binned(j.at("bin_means").get<std::vector<double>>());
  } else {
    Mlp net = Mlp::from_json(j.at("net").dump());
    m = kind == "regressor" ? make_regressor(std::move(net), {}, {})
                            : make_classifier(std::move(net), {}, {});
  }
  m.train_loss_ = j.at("train_loss").get<std::vector<double>>();
  m.val_loss_ = j.at("val_loss").get<std::vector<double>>();
  return m;
}

std::string IntrospectionModel::loss_history_csv() const {
  std::ostringstream os;
  os << "epoch,train_loss,val_loss\n";
  for (size_t e = 0; e < train_loss_.size(); ++e) {
    os << e << ',' << ipr::fmt17(train_loss_[e]) << ','
       << ipr::fmt17(e < val_loss_.size() ? val_loss_[e] : train_loss_[e]) << '\n';
  }
  return os.str();
}

namespace {

// Shared SGD loop over pre-built (x, y) pairs. A deterministic seeded split
// carves off the validation set; epoch order is reshuffled per epoch.
struct Trained {
  Mlp net;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
};

Trained run_training(std::vector<Eigen::VectorXd> xs, std::vector<Eigen::VectorXd> ys,
                     const std::vector<int>& layers, OutputHead head, const TrainConfig& cfg) {
  cfg.validate();
  const size_t n = xs.size();
  ipr::Rng rng(ipr::Rng::derive(cfg.seed, 0x747261696e));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  for (size_t i = n; i-- > 1;) std::swap(order[i], order[rng.uniform_int(i + 1)]);

  const size_t n_val = static_cast<size_t>(cfg.val_fraction * static_cast<double>(n));
  std::vector<Eigen::VectorXd> train_x, train_y, val_x, val_y;
  for (size_t i = 0; i < n; ++i) {
    if (i < n_val) {
      val_x.push_back(xs[order[i]]);
      val_y.push_back(ys[order[i]]);
    } else {
      train_x.push_back(xs[order[i]]);
      train_y.push_back(ys[order[i]]);
    }
  }
  if (train_x.empty()) throw std::invalid_argument("training set empty after validation split");

  Trained t;
  t.net = Mlp::init(layers, head, cfg.seed);
  const size_t n_train = train_x.size();
  std::vector<size_t> idx(n_train);
  for (size_t i = 0; i < n_train; ++i) idx[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = n_train; i-- > 1;) std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
    double epoch_loss = 0.0;
    size_t n_batches = 0;
    for (size_t start = 0; start < n_train; start += cfg.batch_size) {
      const size_t end = std::min(n_train, start + cfg.batch_size);
      std::vector<Eigen::VectorXd> bx, by;
      bx.reserve(end - start);
      by.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        bx.push_back(train_x[idx[i]]);
        by.push_back(train_y[idx[i]]);
      }
      epoch_loss += t.net.train_batch(bx, by, cfg.learning_rate, 0.9);
      ++n_batches;
    }
    t.train_loss.push_back(epoch_loss / static_cast<double>(n_batches));
    t.val_loss.push_back(val_x.empty() ? t.train_loss.back() : t.net.loss(val_x, val_y));
  }
  return t;
}

}  // namespace

IntrospectionModel train_regressor(const std::vector<RegressionSample>& dataset,
                                   const TrainConfig& cfg) {
  if (dataset.empty())
    throw std::invalid_argument("train_regressor: empty dataset (all samples masked out?)");
  const int d = dataset.front().context.dim();
  std::vector<Eigen::VectorXd> xs, ys;
  xs.reserve(dataset.size());
  ys.reserve(dataset.size());
  for (const auto& s : dataset) {
    if (s.target < 0.0 || s.target > 1.0)
      throw std::invalid_argument("train_regressor: target outside [0,1]");
    xs.push_back(s.context.vec());
    ys.push_back(Eigen::VectorXd::Constant(1, s.target));
  }
  Trained t = run_training(std::move(xs), std::move(ys), {d, 16, 16, 1}, OutputHead::kSigmoid,
                           cfg);
  return IntrospectionModel::make_regressor(std::move(t.net), std::move(t.train_loss),
                                            std::move(t.val_loss));
}

IntrospectionModel train_classifier(const std::vector<ClassSample>& dataset,
                                    const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train_classifier: empty dataset");
  const int d = dataset.front().context.dim();
  std::vector<Eigen::VectorXd> xs, ys;
  xs.reserve(dataset.size());
  ys.reserve(dataset.size());
  for (const auto& s : dataset) {
    xs.push_back(s.context.vec());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
    y(static_cast<int>(s.label)) = 1.0;
    ys.push_back(std::move(y));
  }
  Trained t = run_training(std::move(xs), std::move(ys), {d, 16, 16, 4}, OutputHead::kSoftmax,
                           cfg);
  return IntrospectionModel::make_classifier(std::move(t.net), std::move(t.train_loss),
                                             std::move(t.val_loss));
}

IntrospectionModel train_binned(const std::vector<RegressionSample>& dataset) {
  if (dataset.empty()) throw std::invalid_argument("train_binned: empty dataset");
  std::vector<double> sums(kNumRegionClasses, 0.0);
  std::vector<int> counts(kNumRegionClasses, 0);
  double global = 0.0;
  for (const auto& s : dataset) {
    const int c = static_cast<int>(s.context.region());
    sums[c] += s.target;
    ++counts[c];
    global += s.target;
  }
  global /= static_cast<double>(dataset.size());
  std::vector<double> means(kNumRegionClasses, global);
  for (int c = 0; c < kNumRegionClasses; ++c)
    if (counts[c] > 0) means[c] = sums[c] / counts[c];
  return IntrospectionModel::make_binned(std::move(means));
}

}  // namespace ipr::introspect
