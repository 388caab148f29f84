#include "ipr/baselines/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "ipr/core/rng.hpp"
#include "ipr/core/stats.hpp"

namespace ipr::baselines {

std::pair<double, double> ensemble_moments(const std::vector<double>& member_means,
                                           double sigma2) {
  if (member_means.empty()) throw std::invalid_argument("ensemble_moments: empty ensemble");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("ensemble_moments: sigma2 > 0 required");
  const double n = static_cast<double>(member_means.size());
  double mu = 0.0;
  for (double m : member_means) mu += m;
  mu /= n;
  double second = 0.0;
  for (double m : member_means) second += sigma2 + m * m;
  second /= n;
  return {mu, second - mu * mu};
}

double failure_prob(double sigma_ens, double failure_threshold) {
  if (!(sigma_ens > 0.0)) throw std::invalid_argument("failure_prob: sigma_ens > 0 required");
  if (!(failure_threshold > 0.0))
    throw std::invalid_argument("failure_prob: threshold > 0 required");
  return 1.0 - std::erf(failure_threshold / (std::sqrt(2.0) * sigma_ens));
}

MemberTrainer make_correction_trainer(const introspect::TrainConfig& cfg) {
  return [cfg](const std::vector<ErrorRegressionSample>& data, uint64_t seed) {
    if (data.empty()) throw std::invalid_argument("correction trainer: empty dataset");
    introspect::TrainConfig c = cfg;
    c.seed = seed;
    c.val_fraction = 0.0;
    const int d = data.front().context.dim();
    auto net = introspect::Mlp::init({d, 16, 16, 1}, introspect::OutputHead::kLinear, seed);
    std::vector<Eigen::VectorXd> xs, ys;
    xs.reserve(data.size());
    ys.reserve(data.size());
    for (const auto& s : data) {
      xs.push_back(s.context.vec());
      ys.push_back(Eigen::VectorXd::Constant(1, s.error_m));
    }
    Rng rng(Rng::derive(seed, 0x636f7272));
    std::vector<size_t> idx(xs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int epoch = 0; epoch < c.epochs; ++epoch) {
      for (size_t i = idx.size(); i-- > 1;) std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
      for (size_t start = 0; start < idx.size();
           start += static_cast<size_t>(c.batch_size)) {
        const size_t end = std::min(idx.size(), start + c.batch_size);
        std::vector<Eigen::VectorXd> bx, by;
        for (size_t i = start; i < end; ++i) {
          bx.push_back(xs[idx[i]]);
          by.push_back(ys[idx[i]]);
        }
        net.train_batch(bx, by, c.learning_rate, 0.9);
      }
    }
    return net;
  };
}

DepthErrorEnsemble DepthErrorEnsemble::build(const MemberTrainer& trainer,
                                             const EnsembleSpec& spec,
                                             const std::vector<ErrorRegressionSample>& dataset) {
  if (spec.n_members < 1)
    throw std::invalid_argument("DepthErrorEnsemble: n_members >= 1 required");
  if (dataset.empty()) throw std::invalid_argument("DepthErrorEnsemble: empty dataset");

  DepthErrorEnsemble e;
  e.spec_ = spec;
  e.sigma2_ = spec.member_sigma2;

  if (spec.mode == EnsembleSpec::Mode::kRetrain) {
    for (int m = 0; m < spec.n_members; ++m) {
      const uint64_t member_seed = Rng::derive(spec.perturb_seed, 0x656e7300 + m);
      // bootstrap resample, except member 0 of a size-1 ensemble which sees
      // the full data (n = 1 must reduce to the single model)
      std::vector<ErrorRegressionSample> sample;
      if (spec.n_members == 1) {
        sample = dataset;
      } else {
        Rng rng(Rng::derive(member_seed, 0x626f6f74));
        sample.reserve(dataset.size());
        for (size_t i = 0; i < dataset.size(); ++i)
          sample.push_back(dataset[rng.uniform_int(dataset.size())]);
      }
      e.nets_.push_back(trainer(sample, member_seed));
    }
  } else {
    e.nets_.push_back(trainer(dataset, Rng::derive(spec.perturb_seed, 0x647270)));
    const auto& layers = e.nets_[0].layers();
    const double keep = 1.0 - spec.dropout_p;
    for (int m = 0; m < spec.n_members; ++m) {
      Rng rng(Rng::derive(spec.perturb_seed, 0x6d61736b00 + m));
      std::vector<Eigen::VectorXd> masks;
      for (size_t l = 1; l + 1 < layers.size(); ++l) {
        Eigen::VectorXd mask(layers[l]);
        for (int u = 0; u < layers[l]; ++u) mask(u) = rng.uniform() < keep ? 1.0 : 0.0;
        masks.push_back(std::move(mask));
      }
      e.masks_.push_back(std::move(masks));
    }
  }
  return e;
}

std::vector<double> DepthErrorEnsemble::member_means(const ContextFeatures& ctx) const {
  std::vector<double> out;
  out.reserve(spec_.n_members);
  if (spec_.mode == EnsembleSpec::Mode::kRetrain) {
    for (const auto& net : nets_) out.push_back(net.forward(ctx.vec())(0));
  } else {
    const double keep = 1.0 - spec_.dropout_p;
    for (const auto& masks : masks_)
      out.push_back(nets_[0].forward_masked(ctx.vec(), masks, keep)(0));
  }
  return out;
}

double DepthErrorEnsemble::predict_failure_prob(const ContextFeatures& ctx,
                                                double threshold) const {
  const auto [mu, s2] = ensemble_moments(member_means(ctx), sigma2_);
  (void)mu;
  return failure_prob(std::sqrt(s2), threshold);
}

const introspect::Mlp& DepthErrorEnsemble::member_net(int i) const {
  return nets_[spec_.mode == EnsembleSpec::Mode::kRetrain ? i : 0];
}

size_t DepthErrorEnsemble::param_bytes() const {
  size_t total = 0;
  for (const auto& n : nets_) total += n.param_bytes();
  return total;
}

double mixture_nll(const std::vector<std::vector<double>>& member_preds,
                   const std::vector<double>& observed_errors, double sigma2) {
  if (member_preds.size() != observed_errors.size() || member_preds.empty())
    throw std::invalid_argument("mixture_nll: size mismatch or empty input");
  const double sigma = std::sqrt(sigma2);
  double total = 0.0;
  for (size_t j = 0; j < observed_errors.size(); ++j) {
    double p = 0.0;
    for (double mu : member_preds[j]) p += normal_pdf(observed_errors[j], mu, sigma);
    p /= static_cast<double>(member_preds[j].size());
    total -= std::log(std::max(p, 1e-300));
  }
  return total / static_cast<double>(observed_errors.size());
}

double calibrate_sigma2(const std::vector<std::vector<double>>& member_preds,
                        const std::vector<double>& observed_errors) {
  if (observed_errors.empty())
    throw std::invalid_argument("calibrate_sigma2: empty calibration set");
  const auto nll_at = [&](double log10_s2) {
    return mixture_nll(member_preds, observed_errors, std::pow(10.0, log10_s2));
  };

  // coarse scan brackets the minimum (includes -4, the uncalibrated default)
  constexpr double kLo = -6.0;
  constexpr double kHi = 2.0;
  constexpr int kGrid = 33;
  double best_x = kLo;
  double best_v = nll_at(kLo);
  for (int i = 1; i < kGrid; ++i) {
    const double x = kLo + (kHi - kLo) * i / (kGrid - 1);
    const double v = nll_at(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = std::max(kLo, best_x - (kHi - kLo) / (kGrid - 1));
  double b = std::min(kHi, best_x + (kHi - kLo) / (kGrid - 1));

  // golden-section refinement
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = nll_at(c);
  double fd = nll_at(d);
  for (int it = 0; it < 80 && (b - a) > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = nll_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = nll_at(d);
    }
  }
  const double x = 0.5 * (a + b);
  // return whichever probe was best overall, so by construction the result
  // is never worse than the scanned grid (which contains the uncalibrated
  // default)
  return nll_at(x) <= best_v ? std::pow(10.0, x) : std::pow(10.0, best_x);
}

}  // namespace ipr::baselines
