#include "ipr/cli/depth_experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "ipr/cli/parallel.hpp"
#include "ipr/core/rng.hpp"
#include "ipr/depth/metrics.hpp"
#include "ipr/sim/sensors.hpp"

namespace ipr::cli {

DepthSession make_depth_session(const ExperimentConfig& cfg, const WorldParams& world,
                                const sim::NoiseProfile& noise,
                                const depth::StereoCorruption& corruption, int n_frames,
                                uint64_t seed) {
  sim::TrajectoryConfig tc = cfg.trajectory;
  tc.n_frames = n_frames;
  const auto trajectory = sim::generate_trajectory(tc, seed);
  const auto w = sim::build_world(world.to_world_config(trajectory.poses), seed);

  DepthSession session;
  for (size_t f = 0; f < trajectory.size(); ++f) {
    const uint64_t frame_seed = Rng::derive(seed, 0xd40000 + f);
    const auto stereo = depth::observe_stereo(w, trajectory.poses[f], cfg.intr, noise,
                                              frame_seed);
    depth::DepthFrame frame =
        depth::stereo_depth(stereo.left, stereo.right, cfg.intr, cfg.depth.r_max, corruption,
                            frame_seed, static_cast<int>(f));
    const auto sup =
        sim::supervisory_depth(w, trajectory.poses[f], cfg.intr, cfg.depth.sup_sigma,
                               Rng::derive(frame_seed, 0x5d), cfg.depth.r_max,
                               world.disc_radius);
    depth::fill_reference(frame, sup);
    auto labeled = depth::label_depth_frame(frame, cfg.depth.alpha, cfg.depth.r_max);
    session.cells.insert(session.cells.end(), labeled.begin(), labeled.end());
  }
  return session;
}

DepthMethodBundle train_depth_methods(const ExperimentConfig& cfg,
                                      const DepthSession& train_session, uint64_t seed) {
  if (train_session.cells.empty())
    throw std::runtime_error("depth training session produced no labeled cells");

  std::vector<introspect::ClassSample> class_samples;
  std::vector<baselines::ErrorRegressionSample> error_samples;
  class_samples.reserve(train_session.cells.size());
  error_samples.reserve(train_session.cells.size());
  for (const auto& c : train_session.cells) {
    class_samples.push_back({c.context, c.label});
    error_samples.push_back({c.context, c.error_m});
  }

  DepthMethodBundle bundle;

  introspect::TrainConfig tc = cfg.train;
  tc.seed = Rng::derive(seed, 0x697072);
  bundle.ipr = introspect::train_classifier(class_samples, tc);

  // introspector ensemble: distinct seeds + bootstrap resamples
  for (int m = 0; m < cfg.ensemble.n_members; ++m) {
    introspect::TrainConfig mc = cfg.train;
    mc.seed = Rng::derive(seed, 0x69707245 + m);
    std::vector<introspect::ClassSample> boot;
    boot.reserve(class_samples.size());
    Rng rng(Rng::derive(mc.seed, 0x626f6f74));
    for (size_t i = 0; i < class_samples.size(); ++i)
      boot.push_back(class_samples[rng.uniform_int(class_samples.size())]);
    bundle.ipr_members.push_back(introspect::train_classifier(boot, mc));
  }

  introspect::TrainConfig member_cfg = cfg.train;
  member_cfg.epochs = cfg.ensemble.member_epochs;
  member_cfg.learning_rate = cfg.ensemble.member_lr;
  const auto trainer = baselines::make_correction_trainer(member_cfg);

  baselines::EnsembleSpec ens_spec;
  ens_spec.n_members = cfg.ensemble.n_members;
  ens_spec.member_sigma2 = cfg.ensemble.sigma2_uncalib;
  ens_spec.perturb_seed = Rng::derive(seed, 0x656e73);
  ens_spec.mode = baselines::EnsembleSpec::Mode::kRetrain;
  bundle.ensemble = baselines::DepthErrorEnsemble::build(trainer, ens_spec, error_samples);

  baselines::EnsembleSpec mc_spec = ens_spec;
  mc_spec.mode = baselines::EnsembleSpec::Mode::kDropout;
  mc_spec.dropout_p = cfg.ensemble.dropout_p;
  mc_spec.perturb_seed = Rng::derive(seed, 0x6d6364);
  bundle.mcdropout = baselines::DepthErrorEnsemble::build(trainer, mc_spec, error_samples);

  // calibrate the per-member variance on the training cells
  std::vector<std::vector<double>> ens_preds, mc_preds;
  std::vector<double> errors;
  ens_preds.reserve(train_session.cells.size());
  mc_preds.reserve(train_session.cells.size());
  errors.reserve(train_session.cells.size());
  for (const auto& c : train_session.cells) {
    ens_preds.push_back(bundle.ensemble.member_means(c.context));
    mc_preds.push_back(bundle.mcdropout.member_means(c.context));
    errors.push_back(c.error_m);
  }
  bundle.ensemble_sigma2_calibrated = baselines::calibrate_sigma2(ens_preds, errors);
  bundle.mcdropout_sigma2_calibrated = baselines::calibrate_sigma2(mc_preds, errors);
  return bundle;
}

std::vector<double> predict_failure_probs(const DepthMethodBundle& bundle,
                                          const std::string& method,
                                          const std::vector<depth::LabeledCell>& cells,
                                          const ExperimentConfig& cfg) {
  std::vector<double> probs;
  probs.reserve(cells.size());
  const double tau = cfg.depth.alpha;  // failure threshold, meters

  for (const auto& c : cells) {
    double p = 0.0;
    if (method == "ipr") {
      p = bundle.ipr.predict_failure_prob(c.context);
    } else if (method == "ipr-ensemble") {
      for (const auto& m : bundle.ipr_members) p += m.predict_failure_prob(c.context);
      p /= static_cast<double>(bundle.ipr_members.size());
    } else if (method == "ensemble" || method == "ensemble-uncalib") {
      const double s2 = method == "ensemble" ? bundle.ensemble_sigma2_calibrated
                                             : cfg.ensemble.sigma2_uncalib;
      const auto [mu, var] =
          baselines::ensemble_moments(bundle.ensemble.member_means(c.context), s2);
      (void)mu;
      p = baselines::failure_prob(std::sqrt(var), tau);
    } else if (method == "mcdropout" || method == "mcdropout-uncalib") {
      const double s2 = method == "mcdropout" ? bundle.mcdropout_sigma2_calibrated
                                              : cfg.ensemble.sigma2_uncalib;
      const auto [mu, var] =
          baselines::ensemble_moments(bundle.mcdropout.member_means(c.context), s2);
      (void)mu;
      p = baselines::failure_prob(std::sqrt(var), tau);
    } else {
      throw std::invalid_argument("unknown depth method: " + method);
    }
    probs.push_back(std::clamp(p, 0.0, 1.0));
  }
  return probs;
}

DepthSeedOutcome run_depth_seed(const ExperimentConfig& cfg, uint64_t seed) {
  DepthSeedOutcome out;
  try {
    const auto train_session =
        make_depth_session(cfg, cfg.world, cfg.noise, cfg.depth.corruption,
                           cfg.depth.n_frames_train, Rng::derive(seed, 0x747261696e));
    const auto id_session =
        make_depth_session(cfg, cfg.world, cfg.noise, cfg.depth.corruption,
                           cfg.depth.n_frames_test, Rng::derive(seed, 0x696474657374));
    const auto ood_session =
        make_depth_session(cfg, cfg.ood_world, cfg.ood_noise, cfg.ood_corruption,
                           cfg.depth.n_frames_test, Rng::derive(seed, 0x6f6f64));

    const auto bundle = train_depth_methods(cfg, train_session, seed);

    const auto eval = [&](const std::string& split,
                          const std::vector<depth::LabeledCell>& cells) {
      std::vector<FailureLabel> labels;
      labels.reserve(cells.size());
      for (const auto& c : cells) labels.push_back(c.label);
      for (const auto& method : cfg.methods) {
        const auto probs = predict_failure_probs(bundle, method, cells, cfg);
        const auto m = depth::failure_metrics(probs, labels);
        out.rows.push_back({seed, split, method, m.precision, m.recall, m.f1, m.nll, false});
      }
    };
    eval("id", id_session.cells);
    eval("ood", ood_session.cells);
  } catch (const std::exception& e) {
    out.error = e.what();
    out.rows.clear();
    const double nan = std::nan("");
    for (const std::string split : {"id", "ood"})
      for (const auto& method : cfg.methods)
        out.rows.push_back({seed, split, method, nan, nan, nan, nan, true});
  }
  return out;
}

DepthReport run_depth_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<DepthSeedOutcome> outcomes(cfg.seeds.size());
  parallel_for_index(cfg.seeds.size(),
                     [&](size_t i) { outcomes[i] = run_depth_seed(cfg, cfg.seeds[i]); });
  DepthReport report;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    report.rows.insert(report.rows.end(), outcomes[i].rows.begin(), outcomes[i].rows.end());
    if (!outcomes[i].error.empty())
      report.run_log.push_back("seed " + std::to_string(cfg.seeds[i]) +
                               " failed: " + outcomes[i].error);
  }
  return report;
}

}  // namespace ipr::cli
