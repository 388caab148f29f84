#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ipr/cli/bench.hpp"
#include "ipr/cli/config.hpp"
#include "ipr/cli/depth_experiment.hpp"
#include "ipr/cli/slam_experiment.hpp"
#include "ipr/core/rng.hpp"

using namespace ipr;
using namespace ipr::cli;

namespace {

// very small configs keep these tests quick
ExperimentConfig tiny_slam() {
  auto cfg = slam_trivial_config();
  cfg.trajectory.n_frames = 24;
  cfg.world.n_landmarks = 120;
  cfg.train.epochs = 15;
  cfg.seeds = {1, 2};
  return cfg;
}

ExperimentConfig tiny_depth() {
  auto cfg = depth_default_config();
  cfg.depth.n_frames_train = 6;
  cfg.depth.n_frames_test = 4;
  cfg.train.epochs = 25;
  cfg.ensemble.member_epochs = 6;
  cfg.seeds = {1};
  return cfg;
}

}  // namespace

TEST_CASE("config json round trip") {
  const auto cfg = slam_challenge_config();
  const auto text = config_to_json(cfg);
  const auto back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.seeds.size() == 50);
  CHECK(back.world.region_mix[0] == doctest::Approx(0.80));
}

TEST_CASE("config overrides via dotted paths") {
  auto cfg = slam_trivial_config();
  cfg = apply_overrides(cfg, {"slam.rpe_distance=7.5", "trajectory.preset=\"high_turn\"",
                              "train.epochs=3"});
  CHECK(cfg.slam.rpe_distance == 7.5);
  CHECK(cfg.trajectory.preset == sim::TrajectoryPreset::kHighTurnRate);
  CHECK(cfg.train.epochs == 3);
  CHECK_THROWS_AS(apply_overrides(cfg, {"no-equals-sign"}), std::invalid_argument);
}

TEST_CASE("trivial slam config: both methods near zero error, no failures") {
  const auto cfg = tiny_slam();
  const auto report = run_slam_experiment(cfg);
  REQUIRE(report.rows.size() == cfg.seeds.size() * 2);  // row count invariant
  for (const auto& r : report.rows) {
    CHECK(!r.failed);
    CHECK(r.trans_err_pct < 0.05);
    CHECK(r.failures == 0);
  }
}

TEST_CASE("slam experiment report is deterministic") {
  const auto cfg = tiny_slam();
  const auto a = run_slam_experiment(cfg);
  const auto b = run_slam_experiment(cfg);
  CHECK(a.metrics_csv() == b.metrics_csv());
  CHECK(a.sorting_csv() == b.sorting_csv());
  CHECK(a.curve_csv() == b.curve_csv());
}

TEST_CASE("depth experiment report shape and determinism") {
  const auto cfg = tiny_depth();
  const auto a = run_depth_experiment(cfg);
  REQUIRE(a.rows.size() == cfg.seeds.size() * cfg.methods.size() * 2);  // two splits
  for (const auto& r : a.rows) CHECK(!r.failed);
  const auto b = run_depth_experiment(cfg);
  CHECK(a.metrics_csv("id") == b.metrics_csv("id"));
  CHECK(a.metrics_csv("ood") == b.metrics_csv("ood"));
}

TEST_CASE("failed seeds are contained and logged") {
  auto cfg = tiny_slam();
  cfg.seeds = {1, 2};
  // an impossible rpe distance makes every seed's evaluation throw
  cfg.slam.rpe_distance = 1e9;
  const auto report = run_slam_experiment(cfg);
  REQUIRE(report.rows.size() == 4);
  for (const auto& r : report.rows) {
    CHECK(r.failed);
    CHECK(std::isnan(r.trans_err_pct));
  }
  CHECK(report.run_log.size() == 2);
}

TEST_CASE("bench measures the member-count latency ratio") {
  Rng rng(5);
  std::vector<introspect::RegressionSample> reg;
  std::vector<baselines::ErrorRegressionSample> err;
  for (int i = 0; i < 300; ++i) {
    const auto ctx = ContextFeatures::make(
        static_cast<RegionClass>(rng.uniform_int(kNumRegionClasses)), rng.uniform(),
        rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(0.05, 0.5));
    reg.push_back({ctx, rng.uniform()});
    err.push_back({ctx, rng.normal(0.0, 1.0)});
  }
  introspect::TrainConfig tc;
  tc.epochs = 10;
  const auto single = introspect::train_regressor(reg, tc);
  baselines::EnsembleSpec spec;
  spec.n_members = 3;
  auto mc = tc;
  mc.epochs = 5;
  const auto ens = baselines::DepthErrorEnsemble::build(
      baselines::make_correction_trainer(mc), spec, err);

  const auto rep = bench_inference(single, ens, 20000, 1);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].mean_latency_us > 0.0);
  CHECK(rep.latency_ratio > 2.0);
  CHECK(rep.latency_ratio < 4.5);
  // memory accounting: ensemble stores one weight set per member
  CHECK(rep.rows[1].model_bytes > 2 * rep.rows[0].model_bytes / 2);

  CHECK_THROWS_AS(bench_inference(single, ens, 0, 1), std::invalid_argument);
}
