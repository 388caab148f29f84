#include "ipr/cli/config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace ipr::cli {

using nlohmann::json;
using nlohmann::ordered_json;

sim::WorldConfig WorldParams::to_world_config(std::vector<Pose3> corridor) const {
  sim::WorldConfig wc;
  wc.n_landmarks = n_landmarks;
  wc.region_mix = region_mix;
  wc.lateral = lateral;
  wc.vertical = vertical;
  wc.depth_min = depth_min;
  wc.depth_max = depth_max;
  wc.class_depth_min = class_depth_min;
  wc.class_depth_max = class_depth_max;
  wc.cluster_degraded = cluster_degraded;
  wc.disc_radius = disc_radius;
  wc.corridor_poses = std::move(corridor);
  return wc;
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
  if (methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
  intr.validate();
  noise.validate();
  ood_noise.validate();
  train.validate();
}

namespace {

ordered_json mix_to_json(const std::array<double, kNumRegionClasses>& mix) {
  ordered_json j;
  for (int c = 0; c < kNumRegionClasses; ++c)
    j[to_string(static_cast<RegionClass>(c))] = mix[c];
  return j;
}

std::array<double, kNumRegionClasses> mix_from_json(const json& j) {
  std::array<double, kNumRegionClasses> mix{};
  for (int c = 0; c < kNumRegionClasses; ++c)
    mix[c] = j.at(to_string(static_cast<RegionClass>(c))).get<double>();
  return mix;
}

ordered_json world_to_json(const WorldParams& w) {
  ordered_json j;
  j["n_landmarks"] = w.n_landmarks;
  j["region_mix"] = mix_to_json(w.region_mix);
  j["lateral"] = w.lateral;
  j["vertical"] = w.vertical;
  j["depth_min"] = w.depth_min;
  j["depth_max"] = w.depth_max;
  j["class_depth_min"] = mix_to_json(w.class_depth_min);
  j["class_depth_max"] = mix_to_json(w.class_depth_max);
  j["cluster_degraded"] = w.cluster_degraded;
  j["disc_radius"] = w.disc_radius;
  return j;
}

WorldParams world_from_json(const json& j) {
  WorldParams w;
  w.n_landmarks = j.at("n_landmarks").get<int>();
  w.region_mix = mix_from_json(j.at("region_mix"));
  w.lateral = j.at("lateral").get<double>();
  w.vertical = j.at("vertical").get<double>();
  w.depth_min = j.at("depth_min").get<double>();
  w.depth_max = j.at("depth_max").get<double>();
  w.class_depth_min = mix_from_json(j.at("class_depth_min"));
  w.class_depth_max = mix_from_json(j.at("class_depth_max"));
  w.cluster_degraded = j.at("cluster_degraded").get<bool>();
  w.disc_radius = j.at("disc_radius").get<double>();
  return w;
}

ordered_json noise_to_json(const sim::NoiseProfile& n) {
  ordered_json j;
  for (int c = 0; c < kNumRegionClasses; ++c) {
    const auto& rn = n.per_class[c];
    j[to_string(static_cast<RegionClass>(c))] = {{"sigma_px", rn.sigma_px},
                                                 {"outlier_rate", rn.outlier_rate},
                                                 {"outlier_radius", rn.outlier_radius}};
  }
  return j;
}

sim::NoiseProfile noise_from_json(const json& j) {
  sim::NoiseProfile n;
  for (int c = 0; c < kNumRegionClasses; ++c) {
    const auto& cj = j.at(to_string(static_cast<RegionClass>(c)));
    n.per_class[c].sigma_px = cj.at("sigma_px").get<double>();
    n.per_class[c].outlier_rate = cj.at("outlier_rate").get<double>();
    n.per_class[c].outlier_radius = cj.at("outlier_radius").get<double>();
  }
  return n;
}

ordered_json corruption_to_json(const depth::StereoCorruption& c) {
  ordered_json j;
  j["bias_m"] = mix_to_json(c.bias_m);
  j["sigma_m"] = mix_to_json(c.sigma_m);
  j["onset_depth_m"] = mix_to_json(c.onset_depth_m);
  j["onset_width_m"] = mix_to_json(c.onset_width_m);
  return j;
}

depth::StereoCorruption corruption_from_json(const json& j) {
  depth::StereoCorruption c;
  c.bias_m = mix_from_json(j.at("bias_m"));
  c.sigma_m = mix_from_json(j.at("sigma_m"));
  c.onset_depth_m = mix_from_json(j.at("onset_depth_m"));
  c.onset_width_m = mix_from_json(j.at("onset_width_m"));
  return c;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["world"] = world_to_json(cfg.world);
  j["noise"] = noise_to_json(cfg.noise);
  j["intrinsics"] = {{"fx", cfg.intr.fx},       {"fy", cfg.intr.fy},
                     {"cx", cfg.intr.cx},       {"cy", cfg.intr.cy},
                     {"baseline", cfg.intr.baseline}, {"width", cfg.intr.width},
                     {"height", cfg.intr.height}};
  j["trajectory"] = {{"n_frames", cfg.trajectory.n_frames},
                     {"frame_rate", cfg.trajectory.frame_rate},
                     {"speed", cfg.trajectory.speed},
                     {"preset", to_string(cfg.trajectory.preset)},
                     {"turn_scale", cfg.trajectory.turn_scale}};
  j["labeler"] = {{"delta_t", cfg.labeler_cfg.delta_t},
                  {"alpha_sig", cfg.labeler_cfg.gate.alpha_sig},
                  {"dof", cfg.labeler_cfg.gate.dof},
                  {"posterior_sigma_px", cfg.labeler_cfg.posterior_sigma_px},
                  {"posterior_sigma_m", cfg.labeler_cfg.posterior_sigma_m},
                  {"vo_sigma_t", cfg.labeler_cfg.vo_sigma_t},
                  {"vo_sigma_r", cfg.labeler_cfg.vo_sigma_r},
                  {"sup_sigma_t", cfg.labeler_cfg.sup_sigma_t},
                  {"sup_sigma_r", cfg.labeler_cfg.sup_sigma_r},
                  {"sup_sigma_px", cfg.labeler_cfg.sup_sigma_px}};
  j["gp"] = {{"sigma_f2", cfg.gp.kernel.sigma_f2}, {"length", cfg.gp.kernel.length},
             {"sigma_n2", cfg.gp.kernel.sigma_n2}, {"tau_var", cfg.gp.tau_var},
             {"stride", cfg.gp.stride}};
  j["train"] = {{"learning_rate", cfg.train.learning_rate}, {"epochs", cfg.train.epochs},
                {"batch_size", cfg.train.batch_size},       {"seed", cfg.train.seed},
                {"e_max", cfg.train.e_max},                 {"theta_max", cfg.train.theta_max},
                {"val_fraction", cfg.train.val_fraction}};
  j["solver"] = {{"max_iters", cfg.solver.max_iters},
                 {"lm_lambda0", cfg.solver.lm_lambda0},
                 {"tol_grad", cfg.solver.tol_grad},
                 {"tol_step", cfg.solver.tol_step}};
  j["slam"] = {{"n_min_inliers", cfg.slam.n_min_inliers},
               {"rpe_distance", cfg.slam.rpe_distance},
               {"init_sigma_t", cfg.slam.init_sigma_t},
               {"init_sigma_rot_deg", cfg.slam.init_sigma_rot_deg},
               {"init_sigma_point", cfg.slam.init_sigma_point},
               {"sorting_trials", cfg.slam.sorting_trials}};
  j["depth"] = {{"alpha", cfg.depth.alpha},
                {"r_max", cfg.depth.r_max},
                {"sup_sigma", cfg.depth.sup_sigma},
                {"n_frames_train", cfg.depth.n_frames_train},
                {"n_frames_test", cfg.depth.n_frames_test},
                {"corruption", corruption_to_json(cfg.depth.corruption)}};
  j["ood_world"] = world_to_json(cfg.ood_world);
  j["ood_noise"] = noise_to_json(cfg.ood_noise);
  j["ood_corruption"] = corruption_to_json(cfg.ood_corruption);
  j["ensemble"] = {{"n_members", cfg.ensemble.n_members},
                   {"sigma2_uncalib", cfg.ensemble.sigma2_uncalib},
                   {"dropout_p", cfg.ensemble.dropout_p},
                   {"member_epochs", cfg.ensemble.member_epochs},
                   {"member_lr", cfg.ensemble.member_lr}};
  j["methods"] = cfg.methods;
  j["seeds"] = cfg.seeds;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.world = world_from_json(j.at("world"));
  cfg.noise = noise_from_json(j.at("noise"));
  const auto& ij = j.at("intrinsics");
  cfg.intr.fx = ij.at("fx").get<double>();
  cfg.intr.fy = ij.at("fy").get<double>();
  cfg.intr.cx = ij.at("cx").get<double>();
  cfg.intr.cy = ij.at("cy").get<double>();
  cfg.intr.baseline = ij.at("baseline").get<double>();
  cfg.intr.width = ij.at("width").get<int>();
  cfg.intr.height = ij.at("height").get<int>();
  const auto& tj = j.at("trajectory");
  cfg.trajectory.n_frames = tj.at("n_frames").get<int>();
  cfg.trajectory.frame_rate = tj.at("frame_rate").get<double>();
  cfg.trajectory.speed = tj.at("speed").get<double>();
  cfg.trajectory.preset = sim::trajectory_preset_from_string(tj.at("preset"));
  cfg.trajectory.turn_scale = tj.at("turn_scale").get<double>();
  const auto& lj = j.at("labeler");
  cfg.labeler_cfg.delta_t = lj.at("delta_t").get<int>();
  cfg.labeler_cfg.gate.alpha_sig = lj.at("alpha_sig").get<double>();
  cfg.labeler_cfg.gate.dof = lj.at("dof").get<int>();
  cfg.labeler_cfg.posterior_sigma_px = lj.at("posterior_sigma_px").get<double>();
  cfg.labeler_cfg.posterior_sigma_m = lj.at("posterior_sigma_m").get<double>();
  cfg.labeler_cfg.vo_sigma_t = lj.at("vo_sigma_t").get<double>();
  cfg.labeler_cfg.vo_sigma_r = lj.at("vo_sigma_r").get<double>();
  cfg.labeler_cfg.sup_sigma_t = lj.at("sup_sigma_t").get<double>();
  cfg.labeler_cfg.sup_sigma_r = lj.at("sup_sigma_r").get<double>();
  cfg.labeler_cfg.sup_sigma_px = lj.at("sup_sigma_px").get<double>();
  const auto& gj = j.at("gp");
  cfg.gp.kernel.sigma_f2 = gj.at("sigma_f2").get<double>();
  cfg.gp.kernel.length = gj.at("length").get<double>();
  cfg.gp.kernel.sigma_n2 = gj.at("sigma_n2").get<double>();
  cfg.gp.tau_var = gj.at("tau_var").get<double>();
  cfg.gp.stride = gj.at("stride").get<int>();
  const auto& trj = j.at("train");
  cfg.train.learning_rate = trj.at("learning_rate").get<double>();
  cfg.train.epochs = trj.at("epochs").get<int>();
  cfg.train.batch_size = trj.at("batch_size").get<int>();
  cfg.train.seed = trj.at("seed").get<uint64_t>();
  cfg.train.e_max = trj.at("e_max").get<double>();
  cfg.train.theta_max = trj.at("theta_max").get<double>();
  cfg.train.val_fraction = trj.at("val_fraction").get<double>();
  const auto& sj = j.at("solver");
  cfg.solver.max_iters = sj.at("max_iters").get<int>();
  cfg.solver.lm_lambda0 = sj.at("lm_lambda0").get<double>();
  cfg.solver.tol_grad = sj.at("tol_grad").get<double>();
  cfg.solver.tol_step = sj.at("tol_step").get<double>();
  const auto& slj = j.at("slam");
  cfg.slam.n_min_inliers = slj.at("n_min_inliers").get<int>();
  cfg.slam.rpe_distance = slj.at("rpe_distance").get<double>();
  cfg.slam.init_sigma_t = slj.at("init_sigma_t").get<double>();
  cfg.slam.init_sigma_rot_deg = slj.at("init_sigma_rot_deg").get<double>();
  cfg.slam.init_sigma_point = slj.at("init_sigma_point").get<double>();
  cfg.slam.sorting_trials = slj.at("sorting_trials").get<int>();
  const auto& dj = j.at("depth");
  cfg.depth.alpha = dj.at("alpha").get<double>();
  cfg.depth.r_max = dj.at("r_max").get<double>();
  cfg.depth.sup_sigma = dj.at("sup_sigma").get<double>();
  cfg.depth.n_frames_train = dj.at("n_frames_train").get<int>();
  cfg.depth.n_frames_test = dj.at("n_frames_test").get<int>();
  cfg.depth.corruption = corruption_from_json(dj.at("corruption"));
  cfg.ood_world = world_from_json(j.at("ood_world"));
  cfg.ood_noise = noise_from_json(j.at("ood_noise"));
  cfg.ood_corruption = corruption_from_json(j.at("ood_corruption"));
  const auto& ej = j.at("ensemble");
  cfg.ensemble.n_members = ej.at("n_members").get<int>();
  cfg.ensemble.sigma2_uncalib = ej.at("sigma2_uncalib").get<double>();
  cfg.ensemble.dropout_p = ej.at("dropout_p").get<double>();
  cfg.ensemble.member_epochs = ej.at("member_epochs").get<int>();
  cfg.ensemble.member_lr = ej.at("member_lr").get<double>();
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  cfg.out_dir = j.at("out_dir").get<std::string>();
  cfg.validate();
  return cfg;
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& overrides) {
  json j = json::parse(config_to_json(cfg));
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + ov);
    std::string path = "/" + ov.substr(0, eq);
    for (auto& c : path)
      if (c == '.') c = '/';
    json value;
    try {
      value = json::parse(ov.substr(eq + 1));
    } catch (const json::parse_error&) {
      value = ov.substr(eq + 1);  // plain string
    }
    j[json::json_pointer(path)] = value;
  }
  return config_from_json(j.dump());
}

namespace {

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.methods = {"adaptive", "constant"};
  for (uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  return cfg;
}

}  // namespace

ExperimentConfig slam_challenge_config() {
  ExperimentConfig cfg = base_config();
  cfg.world.n_landmarks = 260;
  cfg.world.region_mix = {0.80, 0.08, 0.08, 0.04};
  cfg.world.cluster_degraded = true;
  cfg.noise.per_class[0] = {0.5, 0.02, 20.0};   // clean
  cfg.noise.per_class[1] = {3.0, 0.45, 50.0};   // shadow
  cfg.noise.per_class[2] = {2.5, 0.45, 60.0};   // reflection
  cfg.noise.per_class[3] = {1.5, 0.25, 30.0};   // texture_high
  cfg.trajectory.n_frames = 64;
  cfg.trajectory.preset = sim::TrajectoryPreset::kHighTurnRate;
  cfg.trajectory.speed = 1.2;
  cfg.train.epochs = 120;
  for (uint64_t s = 11; s <= 50; ++s) cfg.seeds.push_back(s);
  return cfg;
}

ExperimentConfig slam_trivial_config() {
  ExperimentConfig cfg = base_config();
  cfg.world.n_landmarks = 200;
  cfg.world.region_mix = {1.0, 0.0, 0.0, 0.0};
  cfg.noise.per_class[0] = {0.0, 0.0, 0.0};
  cfg.trajectory.n_frames = 40;
  cfg.trajectory.preset = sim::TrajectoryPreset::kGentle;
  cfg.train.epochs = 30;
  cfg.seeds = {1, 2};
  return cfg;
}

ExperimentConfig depth_default_config() {
  ExperimentConfig cfg = base_config();
  cfg.methods = {"ipr", "ipr-ensemble", "ensemble", "ensemble-uncalib",
                 "mcdropout", "mcdropout-uncalib"};

  // in-distribution scene: reflective surfaces fail at range, high-frequency
  // texture adds symmetric matching noise
  cfg.world.n_landmarks = 240;
  cfg.world.region_mix = {0.70, 0.0, 0.18, 0.12};
  cfg.world.lateral = 8.0;
  cfg.world.depth_min = 3.0;
  cfg.world.depth_max = 9.5;
  cfg.noise.per_class[0] = {0.4, 0.0, 0.0};
  cfg.noise.per_class[1] = {0.4, 0.0, 0.0};
  cfg.noise.per_class[2] = {0.8, 0.0, 0.0};
  cfg.noise.per_class[3] = {0.8, 0.0, 0.0};
  cfg.depth.corruption.bias_m = {0.0, 0.0, -6.0, 0.0};
  cfg.depth.corruption.sigma_m = {0.0, 0.0, 1.2, 0.9};
  cfg.depth.corruption.onset_depth_m = {0.0, 0.0, 8.0, 0.0};
  cfg.depth.corruption.onset_width_m = {0.3, 0.3, 0.3, 0.3};

  // out-of-distribution scene: novel shadow failures (missed obstacles),
  // more reflective area, noisier matching
  cfg.ood_world = cfg.world;
  cfg.ood_world.region_mix = {0.40, 0.25, 0.25, 0.10};
  cfg.ood_noise = cfg.noise;
  cfg.ood_noise.per_class[1] = {0.9, 0.0, 0.0};
  cfg.ood_corruption = cfg.depth.corruption;
  cfg.ood_corruption.bias_m[1] = 4.0;
  cfg.ood_corruption.sigma_m[1] = 1.0;
  cfg.ood_corruption.sigma_m[3] = 1.2;

  cfg.trajectory.n_frames = 30;
  cfg.trajectory.preset = sim::TrajectoryPreset::kGentle;
  cfg.trajectory.speed = 0.8;
  cfg.train.epochs = 120;
  return cfg;
}

}  // namespace ipr::cli
