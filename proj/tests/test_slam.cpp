#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ipr/core/rng.hpp"
#include "ipr/sim/camera.hpp"
#include "ipr/sim/sensors.hpp"
#include "ipr/sim/world.hpp"
#include "ipr/slam/ba.hpp"
#include "ipr/slam/huber.hpp"
#include "ipr/slam/metrics.hpp"
#include "ipr/slam/residual.hpp"
#include "ipr/slam/tum_io.hpp"

using namespace ipr;
using namespace ipr::slam;

namespace {

Pose3 random_pose(Rng& rng, double t_range = 3.0) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return {q, Eigen::Vector3d(rng.uniform(-t_range, t_range), rng.uniform(-t_range, t_range),
                             rng.uniform(-t_range, t_range))};
}

// finite-difference residual derivative under the solver's perturbation
// convention: T_cw translation += d_rho, rotation <- exp(d_phi) * rotation
Eigen::Vector2d residual_at(const Pose3& t_cw, const Eigen::Vector3d& p_world,
                            const Eigen::Vector2d& obs, const CameraIntrinsics& intr) {
  const Eigen::Vector3d p = t_cw * p_world;
  return obs - Eigen::Vector2d(intr.fx * p.x() / p.z() + intr.cx,
                               intr.fy * p.y() / p.z() + intr.cy);
}

struct TestProblem {
  sim::World world;
  sim::Trajectory traj;
  BAProblem pb;
};

// noise-free BA problem over a short corridor
TestProblem make_problem(uint64_t seed, int frames, double pixel_sigma) {
  TestProblem out;
  sim::TrajectoryConfig tc;
  tc.n_frames = frames;
  tc.preset = sim::TrajectoryPreset::kGentle;
  out.traj = sim::generate_trajectory(tc, seed);
  sim::WorldConfig wc;
  wc.n_landmarks = 120;
  wc.region_mix = {1.0, 0.0, 0.0, 0.0};
  wc.corridor_poses = out.traj.poses;
  out.world = sim::build_world(wc, seed);

  sim::NoiseProfile noise;
  noise.per_class[0].sigma_px = pixel_sigma;

  out.pb.intr = CameraIntrinsics{};
  out.pb.poses = out.traj.poses;
  std::map<int, Track> by_id;
  for (size_t f = 0; f < out.traj.size(); ++f) {
    const auto obs = sim::observe_features(out.world, out.traj.poses[f], out.pb.intr, noise,
                                           Rng::derive(seed, 100 + f));
    for (const auto& o : obs) {
      Track& t = by_id[o.landmark_id];
      t.landmark_id = o.landmark_id;
      TrackObservation to;
      to.frame_index = static_cast<int>(f);
      to.pixel = o.pixel;
      to.scale_sigma = o.scale_sigma;
      to.context = o.context;
      to.theta = 2.0;
      t.observations.push_back(to);
    }
  }
  for (auto& [id, t] : by_id) {
    if (t.observations.size() < 2) continue;
    t.map_point_estimate = out.world.landmarks[id].position;
    out.pb.tracks.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("huber loss branches, continuity, saturation") {
  // identity region
  auto e = huber_eval(0.5, 1.0);
  CHECK(e.rho == doctest::Approx(0.5));
  CHECK(e.drho_dx == doctest::Approx(1.0));

  // outlier branch by hand: 2 * 1 * sqrt(4) - 1 = 3
  e = huber_eval(4.0, 1.0);
  CHECK(e.rho == doctest::Approx(3.0));
  CHECK(e.drho_dx == doctest::Approx(0.5));

  // continuity of value and derivative at x = theta^2
  for (double theta : {0.5, 1.0, 2.0, 5.99}) {
    const double x = theta * theta;
    const auto below = huber_eval(x * (1.0 - 1e-12), theta);
    const auto at = huber_eval(x, theta);
    const auto above = huber_eval(x * (1.0 + 1e-12), theta);
    CHECK(std::fabs(below.rho - at.rho) < 1e-9);
    CHECK(std::fabs(above.rho - at.rho) < 1e-9);
    CHECK(std::fabs(below.drho_dx - 1.0) < 1e-9);
    CHECK(std::fabs(above.drho_dx - 1.0) < 1e-9);
  }
  // theta = 2 boundary: both branches give 4, slopes both 1
  CHECK(huber_eval(4.0, 2.0).rho == doctest::Approx(4.0));
  CHECK(huber_eval(4.0, 2.0).drho_dx == doctest::Approx(1.0));

  // theta = 0 saturates
  e = huber_eval(3.0, 0.0);
  CHECK(e.rho == doctest::Approx(0.0));
  CHECK(e.drho_dx == doctest::Approx(0.0));
  CHECK(huber_eval(0.0, 0.0).rho == 0.0);
  CHECK_THROWS_AS(huber_eval(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("outlier influence shrinks as theta decreases") {
  const double x = 25.0;  // fixed squared residual beyond theta^2
  double prev = huber_eval(x, 4.9).drho_dx;
  for (double theta : {4.0, 3.0, 2.0, 1.0, 0.5, 0.1}) {
    const double d = huber_eval(x, theta).drho_dx;
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("reprojection residual is zero at the exact projection") {
  CameraIntrinsics intr;
  Rng rng(3);
  const Pose3 pose = random_pose(rng);
  const Eigen::Vector3d p_world = pose * Eigen::Vector3d(0.4, -0.2, 6.0);
  const auto exact = sim::project(intr, pose, p_world);
  auto rr = reprojection_residual(pose, p_world, exact, intr);
  CHECK(!rr.behind_camera);
  CHECK(rr.r.norm() < 1e-10);

  rr = reprojection_residual(pose, p_world, exact + Eigen::Vector2d(3, 0), intr);
  CHECK(rr.r(0) == doctest::Approx(3.0));
  CHECK(rr.r(1) == doctest::Approx(0.0));

  // behind the camera: flagged
  const Eigen::Vector3d behind = pose * Eigen::Vector3d(0, 0, -1.0);
  CHECK(reprojection_residual(pose, behind, exact, intr).behind_camera);
}

TEST_CASE("analytic jacobians match finite differences on random configurations") {
  CameraIntrinsics intr;
  Rng rng(5);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 100) {
    const Pose3 pose = random_pose(rng);
    const Eigen::Vector3d p_cam(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(1, 15));
    const Eigen::Vector3d p_world = pose * p_cam;
    const Eigen::Vector2d obs(rng.uniform(0, 640), rng.uniform(0, 480));
    const auto rr = reprojection_residual(pose, p_world, obs, intr);
    REQUIRE(!rr.behind_camera);
    const Pose3 t_cw = pose.inverse();

    for (int k = 0; k < 6; ++k) {
      Eigen::Vector3d d_rho = Eigen::Vector3d::Zero();
      Eigen::Vector3d d_phi = Eigen::Vector3d::Zero();
      if (k < 3) {
        d_rho(k) = h;
      } else {
        d_phi(k - 3) = h;
      }
      Pose3 plus = t_cw;
      plus.translation += d_rho;
      plus.rotation = (so3_exp(d_phi) * plus.rotation).normalized();
      Pose3 minus = t_cw;
      minus.translation -= d_rho;
      minus.rotation = (so3_exp(-d_phi) * minus.rotation).normalized();
      const Eigen::Vector2d fd =
          (residual_at(plus, p_world, obs, intr) - residual_at(minus, p_world, obs, intr)) /
          (2.0 * h);
      const Eigen::Vector2d an = rr.j_pose.col(k);
      CHECK((fd - an).norm() <= 1e-5 * std::max(1.0, an.norm()));
    }
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d dp = Eigen::Vector3d::Zero();
      dp(k) = h;
      const Eigen::Vector2d fd = (residual_at(t_cw, p_world + dp, obs, intr) -
                                  residual_at(t_cw, p_world - dp, obs, intr)) /
                                 (2.0 * h);
      const Eigen::Vector2d an = rr.j_point.col(k);
      CHECK((fd - an).norm() <= 1e-5 * std::max(1.0, an.norm()));
    }
    ++checked;
  }
}

TEST_CASE("assign_thetas endpoints and ordering") {
  std::vector<Track> tracks(1);
  tracks[0].landmark_id = 0;
  for (int i = 0; i < 4; ++i) {
    TrackObservation o;
    o.frame_index = i;
    o.context = ContextFeatures::make(RegionClass::kClean, 0.1 * i, 0.5, 0.5, 0.5, 0.2);
    tracks[0].observations.push_back(o);
  }
  assign_constant_theta(tracks, 5.99);
  for (const auto& o : tracks[0].observations)
    CHECK(o.theta == doctest::Approx(5.99 / 3.0));
}

TEST_CASE("noise-free BA with ground-truth initialization stays put") {
  auto tp = make_problem(31, 10, 0.0);
  const auto res = ba_solve(tp.pb);
  CHECK(res.final_cost < 1e-16);
  for (size_t f = 0; f < tp.traj.size(); ++f) {
    CHECK((res.poses[f].translation - tp.traj.poses[f].translation).norm() < 1e-9);
    CHECK(res.poses[f].rotation.angularDistance(tp.traj.poses[f].rotation) < 1e-9);
  }
}

TEST_CASE("noise-free BA recovers a perturbed initialization exactly") {
  auto tp = make_problem(32, 12, 0.0);
  Rng rng(8);
  const double deg = 3.14159265358979323846 / 180.0;
  // perturb all free poses and all points; first two poses pin the gauge
  for (size_t f = 2; f < tp.pb.poses.size(); ++f) {
    tp.pb.poses[f] = perturb_pose(
        tp.pb.poses[f],
        {rng.normal(0, 0.05), rng.normal(0, 0.05), rng.normal(0, 0.05)},
        {rng.normal(0, deg), rng.normal(0, deg), rng.normal(0, deg)});
  }
  for (auto& t : tp.pb.tracks)
    t.map_point_estimate += Eigen::Vector3d(rng.normal(0, 0.05), rng.normal(0, 0.05),
                                            rng.normal(0, 0.05));
  tp.pb.solver.max_iters = 100;
  const auto res = ba_solve(tp.pb);
  CHECK(res.converged);
  for (size_t f = 0; f < tp.traj.size(); ++f) {
    CHECK((res.poses[f].translation - tp.traj.poses[f].translation).norm() < 1e-6);
    CHECK(res.poses[f].rotation.angularDistance(tp.traj.poses[f].rotation) < 1e-6);
  }
  for (size_t k = 0; k < tp.pb.tracks.size(); ++k) {
    const auto& lm = tp.world.landmarks[tp.pb.tracks[k].landmark_id].position;
    CHECK((res.points[k] - lm).norm() < 1e-5);
  }
}

TEST_CASE("accepted LM steps never increase the cost") {
  auto tp = make_problem(33, 10, 1.0);
  Rng rng(9);
  for (size_t f = 2; f < tp.pb.poses.size(); ++f)
    tp.pb.poses[f] = perturb_pose(tp.pb.poses[f],
                                  {rng.normal(0, 0.1), rng.normal(0, 0.1), rng.normal(0, 0.1)},
                                  {rng.normal(0, 0.02), rng.normal(0, 0.02), rng.normal(0, 0.02)});
  const auto res = ba_solve(tp.pb);
  REQUIRE(res.cost_history.size() >= 2);
  for (size_t i = 1; i < res.cost_history.size(); ++i)
    CHECK(res.cost_history[i] <= res.cost_history[i - 1] + 1e-12);
}

TEST_CASE("rpe basics and constructed drift cases") {
  sim::TrajectoryConfig tc;
  tc.n_frames = 60;
  tc.preset = sim::TrajectoryPreset::kStraight;
  tc.speed = 1.0;
  const auto ref = sim::generate_trajectory(tc, 41);

  // identical trajectories: zero error
  auto r = rpe(ref, ref, 5.0);
  CHECK(r.n_pairs > 0);
  CHECK(r.trans_err_pct == doctest::Approx(0.0));
  CHECK(r.rot_err_deg_per_m == doctest::Approx(0.0));

  // uniform 1% translation drift along the path
  sim::Trajectory est = ref;
  for (size_t i = 0; i < est.size(); ++i) {
    const double s = 0.01 * static_cast<double>(i) * tc.speed;
    est.poses[i].translation += est.poses[i].rotation * Eigen::Vector3d(0, 0, s);
  }
  r = rpe(est, ref, 5.0);
  CHECK(r.trans_err_pct == doctest::Approx(1.0).epsilon(0.01));

  // pure yaw drift of 0.1 deg per meter
  est = ref;
  const double rate = 0.1 * 3.14159265358979323846 / 180.0;  // rad per meter
  for (size_t i = 0; i < est.size(); ++i) {
    const double ang = rate * static_cast<double>(i) * tc.speed;
    est.poses[i].rotation =
        (est.poses[i].rotation * so3_exp({0.0, ang, 0.0})).normalized();
  }
  r = rpe(est, ref, 5.0);
  CHECK(r.rot_err_deg_per_m == doctest::Approx(0.1).epsilon(0.01));

  CHECK_THROWS_AS(rpe(est, ref, 1e9), std::invalid_argument);
}

TEST_CASE("rpe is invariant to a rigid transform of both trajectories") {
  sim::TrajectoryConfig tc;
  tc.n_frames = 40;
  tc.preset = sim::TrajectoryPreset::kGentle;
  const auto ref = sim::generate_trajectory(tc, 43);
  sim::Trajectory est = ref;
  Rng rng(12);
  for (size_t i = 0; i < est.size(); ++i)
    est.poses[i] = perturb_pose(est.poses[i],
                                {rng.normal(0, 0.02), rng.normal(0, 0.02), rng.normal(0, 0.02)},
                                {rng.normal(0, 0.005), rng.normal(0, 0.005), rng.normal(0, 0.005)});
  const auto r1 = rpe(est, ref, 4.0);

  const Pose3 g = random_pose(rng, 10.0);
  sim::Trajectory est_g = est;
  sim::Trajectory ref_g = ref;
  for (size_t i = 0; i < est.size(); ++i) {
    est_g.poses[i] = g * est.poses[i];
    ref_g.poses[i] = g * ref.poses[i];
  }
  const auto r2 = rpe(est_g, ref_g, 4.0);
  CHECK(std::fabs(r1.trans_err_pct - r2.trans_err_pct) < 1e-9);
  CHECK(std::fabs(r1.rot_err_deg_per_m - r2.rot_err_deg_per_m) < 1e-9);
}

TEST_CASE("mdbf definition and no-failure sentinel") {
  sim::TrajectoryConfig tc;
  tc.n_frames = 101;
  tc.preset = sim::TrajectoryPreset::kStraight;
  tc.speed = 1.0;
  const auto ref = sim::generate_trajectory(tc, 44);  // 100 m path

  auto m = mdbf({}, ref);
  CHECK(m.no_failures);
  CHECK(m.meters == doctest::Approx(100.0).epsilon(1e-6));  // lower bound = length

  m = mdbf({50}, ref);
  CHECK(!m.no_failures);
  CHECK(m.meters == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("tracking failure rule fires exactly below the inlier threshold") {
  const std::vector<int> counts = {20, 15, 14, 3, 40};
  const auto failures = tracking_failures(counts, 15);
  CHECK(failures == std::vector<int>({2, 3}));
}

TEST_CASE("sorting curve orderings and degenerate cases") {
  Rng rng(51);
  std::vector<std::pair<double, double>> scored;
  for (int i = 0; i < 400; ++i) {
    const double mag = rng.uniform(0.0, 8.0);
    scored.emplace_back(mag, mag);  // perfectly correlated scores
  }
  auto c = sorting_curve(scored, 50, 7);
  for (size_t i = 0; i < c.ideal.size(); ++i)
    CHECK(c.predicted[i] == doctest::Approx(c.ideal[i]));
  CHECK(c.area_ideal <= c.area_predicted + 1e-12);
  CHECK(c.area_predicted <= c.area_random);

  // random scores stay inside the shuffle band nearly everywhere
  std::vector<std::pair<double, double>> random_scored;
  for (int i = 0; i < 400; ++i)
    random_scored.emplace_back(rng.uniform(), rng.uniform(0.0, 8.0));
  c = sorting_curve(random_scored, 300, 8);
  int inside = 0;
  for (size_t i = 0; i < c.predicted.size(); ++i)
    inside += std::fabs(c.predicted[i] - c.random[i]) <= 2.0 * c.random_std[i] + 1e-12;
  CHECK(static_cast<double>(inside) / c.predicted.size() >= 0.9);

  CHECK_THROWS_AS(sorting_curve({{1.0, 1.0}}, 10, 1), std::invalid_argument);
}

TEST_CASE("tum round trip is bit exact") {
  sim::TrajectoryConfig tc;
  tc.n_frames = 25;
  const auto t = sim::generate_trajectory(tc, 45);
  const std::string tum = trajectory_to_tum(t);
  const auto back = trajectory_from_tum(tum, t.frame_rate);
  REQUIRE(back.size() == t.size());
  CHECK(trajectory_to_tum(back) == tum);
  for (size_t i = 0; i < t.size(); ++i) {
    CHECK(back.frame_ids[i] == t.frame_ids[i]);
    CHECK((back.poses[i].translation - t.poses[i].translation).norm() == 0.0);
  }
}
