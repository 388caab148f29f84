// Experiment runner for the introspective-perception library: dataset
// collection, introspection-function training, SLAM and depth evaluations,
// inference benchmarking and failure clustering.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipr/cli/bench.hpp"
#include "ipr/cli/config.hpp"
#include "ipr/cli/depth_experiment.hpp"
#include "ipr/cli/slam_experiment.hpp"
#include "ipr/core/io.hpp"
#include "ipr/core/rng.hpp"
#include "ipr/depth/labeling.hpp"
#include "ipr/gp/costmap.hpp"
#include "ipr/introspect/kmeans.hpp"
#include "ipr/labeler/labeler.hpp"

namespace {

struct CommonOpts {
  std::string preset = "slam-challenge";
  std::string config_path;
  std::vector<std::string> overrides;
  std::string seeds_range;
  uint64_t seed = 1;
  bool seed_given = false;
  std::string methods_list;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset,
                  "base preset: slam-challenge, slam-trivial, depth-default");
  cmd->add_option("--config", o.config_path, "JSON config file (overrides the preset)");
  cmd->add_option("--set", o.overrides, "override a config key, e.g. --set slam.rpe_distance=5");
  cmd->add_option("--seeds", o.seeds_range, "seed range a..b");
  cmd->add_option("--seed", o.seed, "single seed")->each([&o](const std::string&) {
    o.seed_given = true;
  });
  cmd->add_option("--method", o.methods_list, "comma-separated method list");
  cmd->add_option("--out", o.out_dir, "output directory");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

ipr::cli::ExperimentConfig resolve_config(const CommonOpts& o) {
  ipr::cli::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    cfg = ipr::cli::config_from_json(ipr::read_file(o.config_path));
  } else if (o.preset == "slam-challenge") {
    cfg = ipr::cli::slam_challenge_config();
  } else if (o.preset == "slam-trivial") {
    cfg = ipr::cli::slam_trivial_config();
  } else if (o.preset == "depth-default") {
    cfg = ipr::cli::depth_default_config();
  } else {
    throw std::invalid_argument("unknown preset: " + o.preset);
  }
  if (!o.overrides.empty()) cfg = ipr::cli::apply_overrides(cfg, o.overrides);
  if (!o.seeds_range.empty()) {
    const auto dots = o.seeds_range.find("..");
    if (dots == std::string::npos)
      throw std::invalid_argument("--seeds expects a..b, got " + o.seeds_range);
    const uint64_t a = std::stoull(o.seeds_range.substr(0, dots));
    const uint64_t b = std::stoull(o.seeds_range.substr(dots + 2));
    if (b < a) throw std::invalid_argument("--seeds range is empty");
    cfg.seeds.clear();
    for (uint64_t s = a; s <= b; ++s) cfg.seeds.push_back(s);
  } else if (o.seed_given) {
    cfg.seeds = {o.seed};
  }
  if (!o.methods_list.empty()) cfg.methods = split_list(o.methods_list);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

int run_collect(const CommonOpts& o, const std::string& out_file,
                const std::string& dump_world) {
  const auto cfg = resolve_config(o);
  const uint64_t seed = cfg.seeds.front();
  const auto session = ipr::cli::make_session(cfg, seed, 0x545241);
  auto lc = cfg.labeler_cfg;
  lc.intr = cfg.intr;
  lc.noise = cfg.noise;
  const auto samples =
      ipr::labeler::collect_dataset(session.world, session.trajectory, lc,
                                    ipr::Rng::derive(seed, 0x545241));
  ipr::write_file(out_file, ipr::error_samples_to_csv(samples));
  std::cout << "wrote " << samples.size() << " samples to " << out_file << '\n';
  if (!dump_world.empty()) {
    ipr::write_file(dump_world, ipr::sim::world_to_json(session.world));
    ipr::write_file(dump_world + ".trajectory.json",
                    ipr::sim::trajectory_to_json(session.trajectory));
    std::cout << "wrote world to " << dump_world << '\n';
  }
  return 0;
}

int run_train(const CommonOpts& o, const std::string& in_file, const std::string& model_file,
              const std::string& loss_file, const std::string& dump_costmap) {
  const auto cfg = resolve_config(o);
  const auto samples = ipr::error_samples_from_csv(ipr::read_file(in_file));

  std::map<int, std::vector<const ipr::ErrorSample*>> by_frame;
  for (const auto& s : samples) by_frame[s.frame_id].push_back(&s);

  std::vector<ipr::introspect::RegressionSample> train_set;
  bool dumped = false;
  for (const auto& [frame, frame_samples] : by_frame) {
    std::vector<std::pair<Eigen::Vector2d, double>> gp_samples;
    for (const auto* s : frame_samples) {
      const Eigen::Vector2d px(s->context.vec()(5) * cfg.intr.width,
                               s->context.vec()(6) * cfg.intr.height);
      gp_samples.emplace_back(
          px, ipr::introspect::normalize_error(s->magnitude, cfg.train.e_max));
    }
    const auto cm = ipr::gp::build_costmap(gp_samples, cfg.intr, cfg.gp.kernel,
                                           cfg.gp.stride, cfg.gp.tau_var);
    if (!dump_costmap.empty() && !dumped) {
      ipr::write_file(dump_costmap + ".grid.csv", ipr::gp::costmap_grid_csv(cm));
      ipr::write_file(dump_costmap + ".mask.csv", ipr::gp::costmap_mask_csv(cm));
      dumped = true;
    }
    for (size_t i = 0; i < frame_samples.size(); ++i) {
      if (!cm.masked_in(gp_samples[i].first)) continue;
      train_set.push_back({frame_samples[i]->context, cm.at(gp_samples[i].first)});
    }
  }

  auto tc = cfg.train;
  tc.seed = cfg.seeds.front();
  const auto model = ipr::introspect::train_regressor(train_set, tc);
  ipr::write_file(model_file, model.to_json());
  if (!loss_file.empty()) ipr::write_file(loss_file, model.loss_history_csv());
  std::cout << "trained on " << train_set.size() << " masked-in samples; model -> "
            << model_file << '\n';
  return 0;
}

int run_predict(const std::string& model_file, const std::string& in_file,
                const std::string& out_file) {
  const auto model = ipr::introspect::IntrospectionModel::from_json(ipr::read_file(model_file));
  const auto samples = ipr::error_samples_from_csv(ipr::read_file(in_file));
  std::ostringstream os;
  os << "frame_id,predicted_cost\n";
  for (const auto& s : samples)
    os << s.frame_id << ',' << ipr::fmt17(model.predict_cost(s.context)) << '\n';
  ipr::write_file(out_file, os.str());
  std::cout << "wrote " << samples.size() << " predictions to " << out_file << '\n';
  return 0;
}

int run_cluster(const std::string& model_file, const std::string& in_file, int k,
                uint64_t seed, const std::string& out_file) {
  const auto model = ipr::introspect::IntrospectionModel::from_json(ipr::read_file(model_file));
  const auto cells = ipr::depth::labeled_cells_from_csv(ipr::read_file(in_file));
  std::vector<ipr::ContextFeatures> failure_ctx;
  std::vector<size_t> failure_idx;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (model.predict_failure_prob(cells[i].context) > 0.5) {
      failure_ctx.push_back(cells[i].context);
      failure_idx.push_back(i);
    }
  }
  if (failure_ctx.empty()) {
    std::cout << "no predicted failures; nothing to cluster\n";
    ipr::write_file(out_file, "cell,cluster\n");
    return 0;
  }
  const auto result = ipr::introspect::cluster_failures(
      failure_ctx, std::min<int>(k, static_cast<int>(failure_ctx.size())), seed);
  std::ostringstream os;
  os << "cell,cluster\n";
  for (size_t i = 0; i < failure_idx.size(); ++i)
    os << failure_idx[i] << ',' << result.assignment[i] << '\n';
  ipr::write_file(out_file, os.str());
  std::cout << "clustered " << failure_ctx.size() << " predicted failures into "
            << result.centroids.size() << " groups -> " << out_file << '\n';
  return 0;
}

int run_bench(const CommonOpts& o, int n_queries) {
  auto cfg = resolve_config(o);
  const uint64_t seed = cfg.seeds.front();

  // small synthetic training set; per-member cost is what matters here
  ipr::Rng rng(ipr::Rng::derive(seed, 0x62656e));
  std::vector<ipr::introspect::RegressionSample> reg;
  std::vector<ipr::baselines::ErrorRegressionSample> err;
  for (int i = 0; i < 400; ++i) {
    const auto ctx = ipr::ContextFeatures::make(
        static_cast<ipr::RegionClass>(rng.uniform_int(ipr::kNumRegionClasses)),
        rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(0.05, 0.5));
    reg.push_back({ctx, rng.uniform()});
    err.push_back({ctx, rng.normal(0.0, 1.0)});
  }
  auto tc = cfg.train;
  tc.epochs = 20;
  tc.seed = seed;
  const auto single = ipr::introspect::train_regressor(reg, tc);

  ipr::baselines::EnsembleSpec spec;
  spec.n_members = cfg.ensemble.n_members;
  spec.member_sigma2 = cfg.ensemble.sigma2_uncalib;
  spec.perturb_seed = seed;
  auto mc = tc;
  mc.epochs = cfg.ensemble.member_epochs;
  const auto ens = ipr::baselines::DepthErrorEnsemble::build(
      ipr::baselines::make_correction_trainer(mc), spec, err);

  const auto rep = ipr::cli::bench_inference(single, ens, n_queries, seed);
  std::cout << rep.csv();
  std::cout << "latency ratio (ensemble / single): " << rep.latency_ratio << '\n';
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    ipr::write_file(cfg.out_dir + "/bench.csv", rep.csv());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"introspective perception experiment runner"};
  app.require_subcommand(1);

  CommonOpts collect_o, train_o, slam_o, depth_o, bench_o;
  std::string collect_out = "samples.csv";
  std::string dump_world;
  auto* collect = app.add_subcommand("collect", "collect labeled error samples");
  add_common(collect, collect_o);
  collect->add_option("--samples-out", collect_out, "output samples CSV");
  collect->add_option("--dump-world", dump_world, "dump the world as JSON");

  std::string train_in = "samples.csv";
  std::string model_out = "model.json";
  std::string loss_out;
  std::string dump_costmap;
  auto* train = app.add_subcommand("train", "train an introspection regressor");
  add_common(train, train_o);
  train->add_option("--in", train_in, "collected samples CSV");
  train->add_option("--model-out", model_out, "output model JSON");
  train->add_option("--loss-out", loss_out, "loss history CSV");
  train->add_option("--dump-costmap", dump_costmap, "dump the first frame's cost-map (prefix)");

  std::string predict_model = "model.json";
  std::string predict_in = "samples.csv";
  std::string predict_out = "predictions.csv";
  auto* predict = app.add_subcommand("predict", "predict costs for collected samples");
  predict->add_option("--model", predict_model, "model JSON");
  predict->add_option("--in", predict_in, "samples CSV");
  predict->add_option("--out", predict_out, "predictions CSV");

  auto* slam_eval = app.add_subcommand("slam-eval", "adaptive vs constant robust BA");
  add_common(slam_eval, slam_o);

  auto* depth_eval = app.add_subcommand("depth-eval", "depth failure prediction methods");
  add_common(depth_eval, depth_o);

  int bench_queries = 10000;
  auto* bench = app.add_subcommand("bench", "inference latency: introspector vs ensemble");
  add_common(bench, bench_o);
  bench->add_option("--queries", bench_queries, "number of inference queries");

  std::string cluster_model = "model.json";
  std::string cluster_in = "cells.csv";
  std::string cluster_out = "clusters.csv";
  int cluster_k = 2;
  uint64_t cluster_seed = 1;
  auto* cluster = app.add_subcommand("cluster", "k-means over predicted failure contexts");
  cluster->add_option("--model", cluster_model, "classifier model JSON");
  cluster->add_option("--in", cluster_in, "labeled cells CSV");
  cluster->add_option("--k", cluster_k, "number of clusters");
  cluster->add_option("--seed", cluster_seed, "clustering seed");
  cluster->add_option("--out", cluster_out, "assignments CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (collect->parsed()) return run_collect(collect_o, collect_out, dump_world);
    if (train->parsed()) return run_train(train_o, train_in, model_out, loss_out, dump_costmap);
    if (predict->parsed()) return run_predict(predict_model, predict_in, predict_out);
    if (cluster->parsed())
      return run_cluster(cluster_model, cluster_in, cluster_k, cluster_seed, cluster_out);
    if (bench->parsed()) return run_bench(bench_o, bench_queries);
    if (slam_eval->parsed()) {
      const auto cfg = resolve_config(slam_o);
      const auto report = ipr::cli::run_slam_experiment(cfg);
      report.write(cfg.out_dir);
      const auto a = report.aggregate("adaptive");
      const auto c = report.aggregate("constant");
      std::cout << "adaptive: trans " << a.mean_trans_err_pct << "% rot "
                << a.mean_rot_err_deg_per_m << " deg/m mdbf " << a.mean_mdbf_m << " m\n"
                << "constant: trans " << c.mean_trans_err_pct << "% rot "
                << c.mean_rot_err_deg_per_m << " deg/m mdbf " << c.mean_mdbf_m << " m\n"
                << "report -> " << cfg.out_dir << '\n';
      return report.run_log.empty() ? 0 : 2;
    }
    if (depth_eval->parsed()) {
      const auto cfg = resolve_config(depth_o);
      const auto report = ipr::cli::run_depth_experiment(cfg);
      report.write(cfg.out_dir);
      for (const auto& m : cfg.methods) {
        const auto id = report.aggregate(m, "id");
        const auto ood = report.aggregate(m, "ood");
        std::cout << m << ": id nll " << id.mean_nll << " ood nll " << ood.mean_nll << '\n';
      }
      std::cout << "report -> " << cfg.out_dir << '\n';
      return report.run_log.empty() ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
