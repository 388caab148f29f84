#include "ipr/cli/slam_experiment.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "ipr/cli/parallel.hpp"
#include "ipr/core/rng.hpp"
#include "ipr/gp/costmap.hpp"
#include "ipr/labeler/labeler.hpp"
#include "ipr/sim/camera.hpp"
#include "ipr/slam/metrics.hpp"

namespace ipr::cli {

namespace {
constexpr uint64_t kTrainTag = 0x545241;
constexpr uint64_t kTestTag = 0x544553;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

SlamSession make_session(const ExperimentConfig& cfg, uint64_t seed, uint64_t session_tag) {
  SlamSession s;
  const uint64_t session_seed = Rng::derive(seed, session_tag);
  s.trajectory = sim::generate_trajectory(cfg.trajectory, session_seed);
  s.world = sim::build_world(cfg.world.to_world_config(s.trajectory.poses), session_seed);
  s.observations.reserve(s.trajectory.size());
  for (size_t f = 0; f < s.trajectory.size(); ++f) {
    s.observations.push_back(sim::observe_features(
        s.world, s.trajectory.poses[f], cfg.intr, cfg.noise,
        Rng::derive(session_seed, 0xfeed00 + f)));
  }
  return s;
}

introspect::IntrospectionModel train_slam_introspector(const ExperimentConfig& cfg,
                                                       const SlamSession& train_session,
                                                       uint64_t seed) {
  labeler::CollectConfig lc = cfg.labeler_cfg;
  lc.intr = cfg.intr;
  lc.noise = cfg.noise;
  const auto samples = labeler::collect_dataset(train_session.world,
                                                train_session.trajectory, lc,
                                                Rng::derive(seed, kTrainTag));

  // group by frame; the sample's pixel location is recoverable from the
  // normalized image coordinates stored in its context
  std::map<int, std::vector<const ErrorSample*>> by_frame;
  for (const auto& s : samples) by_frame[s.frame_id].push_back(&s);

  std::vector<introspect::RegressionSample> train_set;
  for (const auto& [frame, frame_samples] : by_frame) {
    std::vector<std::pair<Eigen::Vector2d, double>> gp_samples;
    gp_samples.reserve(frame_samples.size());
    for (const auto* s : frame_samples) {
      const Eigen::Vector2d px(s->context.vec()(5) * cfg.intr.width,
                               s->context.vec()(6) * cfg.intr.height);
      gp_samples.emplace_back(px, introspect::normalize_error(s->magnitude, cfg.train.e_max));
    }
    const gp::CostMap cm =
        gp::build_costmap(gp_samples, cfg.intr, cfg.gp.kernel, cfg.gp.stride, cfg.gp.tau_var);
    for (size_t i = 0; i < frame_samples.size(); ++i) {
      // targets only from confidently interpolated cost-map cells
      if (!cm.masked_in(gp_samples[i].first)) continue;
      train_set.push_back({frame_samples[i]->context, cm.at(gp_samples[i].first)});
    }
  }

  introspect::TrainConfig tc = cfg.train;
  tc.seed = Rng::derive(seed, 0x726567);
  return introspect::train_regressor(train_set, tc);
}

slam::BAProblem build_ba_problem(const ExperimentConfig& cfg, const SlamSession& session,
                                 uint64_t seed) {
  slam::BAProblem pb;
  pb.intr = cfg.intr;
  pb.solver = cfg.solver;
  pb.num_fixed_poses = 2;

  Rng rng(Rng::derive(seed, 0x696e6974));
  const double sr = cfg.slam.init_sigma_rot_deg * kDegToRad;
  pb.poses.reserve(session.trajectory.size());
  for (size_t f = 0; f < session.trajectory.size(); ++f) {
    const Pose3& gt = session.trajectory.poses[f];
    if (static_cast<int>(f) < pb.num_fixed_poses) {
      pb.poses.push_back(gt);
      continue;
    }
    const Eigen::Vector3d dt(rng.normal(0.0, cfg.slam.init_sigma_t),
                             rng.normal(0.0, cfg.slam.init_sigma_t),
                             rng.normal(0.0, cfg.slam.init_sigma_t));
    const Eigen::Vector3d dr(rng.normal(0.0, sr), rng.normal(0.0, sr), rng.normal(0.0, sr));
    pb.poses.push_back(perturb_pose(gt, dt, dr));
  }

  std::map<int, slam::Track> by_landmark;
  for (size_t f = 0; f < session.observations.size(); ++f) {
    for (const auto& obs : session.observations[f]) {
      slam::Track& tr = by_landmark[obs.landmark_id];
      tr.landmark_id = obs.landmark_id;
      slam::TrackObservation to;
      to.frame_index = static_cast<int>(f);
      to.pixel = obs.pixel;
      to.scale_sigma = obs.scale_sigma;
      to.context = obs.context;
      tr.observations.push_back(std::move(to));
    }
  }
  for (auto& [id, tr] : by_landmark) {
    if (tr.observations.size() < 2) continue;  // unconstrained point
    tr.map_point_estimate =
        session.world.landmarks[id].position +
        Eigen::Vector3d(rng.normal(0.0, cfg.slam.init_sigma_point),
                        rng.normal(0.0, cfg.slam.init_sigma_point),
                        rng.normal(0.0, cfg.slam.init_sigma_point));
    pb.tracks.push_back(std::move(tr));
  }
  return pb;
}

namespace {

SlamRow evaluate_solution(const ExperimentConfig& cfg, const SlamSession& session,
                          const slam::BAProblem& pb, const slam::BAResult& result,
                          uint64_t seed, const std::string& method) {
  SlamRow row;
  row.seed = seed;
  row.method = method;

  const auto inliers = slam::frame_inlier_counts(pb, result);
  const auto failures = slam::tracking_failures(inliers, cfg.slam.n_min_inliers);
  row.failures = static_cast<int>(failures.size());
  row.mdbf_m = slam::mdbf(failures, session.trajectory).meters;

  sim::Trajectory est = session.trajectory;  // frame ids / rate from reference
  est.poses = result.poses;
  // reinitialize at failures: the estimate continues from ground truth, and
  // RPE skips pairs that touch a failed frame
  std::vector<int> excluded;
  for (int f : failures) {
    est.poses[f] = session.trajectory.poses[f];
    excluded.push_back(session.trajectory.frame_ids[f]);
  }
  const auto r = slam::rpe(est, session.trajectory, cfg.slam.rpe_distance, excluded);
  row.trans_err_pct = r.trans_err_pct;
  row.rot_err_deg_per_m = r.rot_err_deg_per_m;
  return row;
}

}  // namespace

SlamSeedOutcome run_slam_seed(const ExperimentConfig& cfg, uint64_t seed) {
  SlamSeedOutcome out;
  try {
    const SlamSession train_session = make_session(cfg, seed, kTrainTag);
    const SlamSession test_session = make_session(cfg, seed, kTestTag);
    const auto model = train_slam_introspector(cfg, train_session, seed);

    slam::BAProblem pb = build_ba_problem(cfg, test_session, seed);

    slam::BAProblem adaptive_pb = pb;
    slam::assign_thetas(adaptive_pb.tracks, model, cfg.train.theta_max);
    const auto adaptive_result = slam::ba_solve(adaptive_pb);
    out.adaptive =
        evaluate_solution(cfg, test_session, adaptive_pb, adaptive_result, seed, "adaptive");

    slam::BAProblem constant_pb = pb;
    slam::assign_constant_theta(constant_pb.tracks, cfg.train.theta_max);
    const auto constant_result = slam::ba_solve(constant_pb);
    out.constant =
        evaluate_solution(cfg, test_session, constant_pb, constant_result, seed, "constant");

    // feature-quality sorting: predicted cost vs. true reprojection-error
    // magnitude over the test observations
    std::vector<std::pair<double, double>> scored;
    for (size_t f = 0; f < test_session.observations.size(); ++f) {
      const auto exact = sim::visible_landmarks(test_session.world,
                                                test_session.trajectory.poses[f], cfg.intr);
      std::map<int, const sim::VisibleLandmark*> by_id;
      for (const auto& v : exact) by_id[v.landmark_id] = &v;
      for (const auto& obs : test_session.observations[f]) {
        const auto it = by_id.find(obs.landmark_id);
        if (it == by_id.end()) continue;
        scored.emplace_back(model.predict_cost(obs.context),
                            (obs.pixel - it->second->pixel).norm());
      }
    }
    out.curve = slam::sorting_curve(scored, cfg.slam.sorting_trials,
                                    Rng::derive(seed, 0x736f7274));
    out.sorting = {seed, out.curve.area_ideal, out.curve.area_predicted,
                   out.curve.area_random};
  } catch (const std::exception& e) {
    out.error = e.what();
    const double nan = std::nan("");
    out.adaptive = {seed, "adaptive", nan, nan, 0, nan, true};
    out.constant = {seed, "constant", nan, nan, 0, nan, true};
    out.sorting = {seed, nan, nan, nan};
  }
  return out;
}

SlamReport run_slam_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SlamSeedOutcome> outcomes(cfg.seeds.size());
  parallel_for_index(cfg.seeds.size(),
                     [&](size_t i) { outcomes[i] = run_slam_seed(cfg, cfg.seeds[i]); });

  SlamReport report;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    report.rows.push_back(outcomes[i].adaptive);
    report.rows.push_back(outcomes[i].constant);
    report.sorting.push_back(outcomes[i].sorting);
    if (!outcomes[i].error.empty())
      report.run_log.push_back("seed " + std::to_string(cfg.seeds[i]) +
                               " failed: " + outcomes[i].error);
  }
  if (!outcomes.empty() && outcomes.front().error.empty())
    report.example_curve = outcomes.front().curve;
  return report;
}

}  // namespace ipr::cli
