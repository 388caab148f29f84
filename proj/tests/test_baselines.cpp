#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ipr/baselines/ensemble.hpp"
#include "ipr/core/rng.hpp"
#include "ipr/core/stats.hpp"

using namespace ipr;
using namespace ipr::baselines;

namespace {

ContextFeatures ctx_of(Rng& rng, RegionClass rc, double inv_depth) {
  return ContextFeatures::make(rc, rng.uniform(), rng.uniform(), rng.uniform(),
                               rng.uniform(), inv_depth);
}

// clean cells are accurate, reflection cells carry a -3 m bias with noise
std::vector<ErrorRegressionSample> planted_errors(int n, double label_noise, uint64_t seed) {
  Rng rng(seed);
  std::vector<ErrorRegressionSample> out;
  for (int i = 0; i < n; ++i) {
    const bool refl = rng.uniform() < 0.3;
    const double err = refl ? -3.0 + rng.normal(0.0, label_noise)
                            : rng.normal(0.0, 0.2 + label_noise);
    out.push_back({ctx_of(rng, refl ? RegionClass::kReflection : RegionClass::kClean, 0.2),
                   err});
  }
  return out;
}

introspect::TrainConfig member_cfg() {
  introspect::TrainConfig cfg;
  cfg.epochs = 12;
  cfg.learning_rate = 0.05;
  return cfg;
}

}  // namespace

TEST_CASE("ensemble moments closed form") {
  // single member collapses to its own moments
  auto [mu, s2] = ensemble_moments({3.0}, 0.25);
  CHECK(mu == doctest::Approx(3.0));
  CHECK(s2 == doctest::Approx(0.25));

  // two members by hand: mean(0.25+1, 0.25+9) - 4 = 1.25
  std::tie(mu, s2) = ensemble_moments({1.0, 3.0}, 0.25);
  CHECK(mu == doctest::Approx(2.0));
  CHECK(s2 == doctest::Approx(1.25));

  CHECK_THROWS_AS(ensemble_moments({}, 0.25), std::invalid_argument);
}

TEST_CASE("ensemble moments match Monte Carlo draws of the mixture") {
  Rng rng(3);
  const std::vector<double> means = {-1.2, 0.4, 2.0};
  const double sigma2 = 0.36;
  const auto [mu, s2] = ensemble_moments(means, sigma2);

  const int n = 1000000;
  double acc = 0.0, acc2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = means[rng.uniform_int(means.size())];
    const double x = rng.normal(m, std::sqrt(sigma2));
    acc += x;
    acc2 += x * x;
  }
  const double mc_mean = acc / n;
  const double mc_var = acc2 / n - mc_mean * mc_mean;
  CHECK(std::fabs(mc_mean - mu) < 1e-2);
  CHECK(std::fabs(mc_var - s2) < 1e-2);
}

TEST_CASE("mixture variance never drops below the member variance") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> means;
    const int n = 1 + static_cast<int>(rng.uniform_int(6));
    for (int i = 0; i < n; ++i) means.push_back(rng.uniform(-5, 5));
    const double sigma2 = rng.uniform(1e-6, 2.0);
    const auto [mu, s2] = ensemble_moments(means, sigma2);
    (void)mu;
    CHECK(s2 >= sigma2 - 1e-12);
  }
}

TEST_CASE("failure probability endpoints and the sigma=1 reference value") {
  CHECK(failure_prob(1e-9, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(failure_prob(1e9, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  // 1 - erf(1/sqrt(2)) = 0.3173: P(|e| > 1) for a standard normal
  CHECK(failure_prob(1.0, 1.0) == doctest::Approx(0.3173).epsilon(1e-3));

  // strictly increasing in sigma, always in (0,1)
  double prev = failure_prob(0.05, 1.0);
  for (double s = 0.1; s < 6.0; s += 0.1) {
    const double p = failure_prob(s, 1.0);
    CHECK(p > prev);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    prev = p;
  }
  CHECK_THROWS_AS(failure_prob(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("failure probability matches a numeric normal-tail oracle") {
  // Simpson integration of the N(0, sigma^2) density outside [-tau, tau]
  const auto tail_oracle = [](double sigma, double tau) {
    const int n = 20000;
    const double h = tau / n;
    double s = normal_pdf(0.0, 0.0, sigma) + normal_pdf(tau, 0.0, sigma);
    for (int i = 1; i < n; ++i) s += normal_pdf(i * h, 0.0, sigma) * (i % 2 ? 4.0 : 2.0);
    const double inside = 2.0 * s * h / 3.0;
    return 1.0 - inside;
  };
  for (double sigma : {0.5, 1.0, 2.3}) {
    CHECK(failure_prob(sigma, 1.0) == doctest::Approx(tail_oracle(sigma, 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("single-member ensemble equals the single model") {
  const auto data = planted_errors(600, 0.3, 7);
  EnsembleSpec spec;
  spec.n_members = 1;
  spec.perturb_seed = 5;
  const auto trainer = make_correction_trainer(member_cfg());
  const auto ens = DepthErrorEnsemble::build(trainer, spec, data);
  const auto single = trainer(data, Rng::derive(5, 0x656e7300));
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto c = ctx_of(rng, RegionClass::kReflection, 0.2);
    const auto means = ens.member_means(c);
    REQUIRE(means.size() == 1);
    CHECK(means[0] == single.forward(c.vec())(0));
  }
}

TEST_CASE("distinct seeds give distinct members") {
  const auto data = planted_errors(600, 0.3, 9);
  EnsembleSpec spec;
  spec.n_members = 3;
  spec.perturb_seed = 11;
  const auto ens =
      DepthErrorEnsemble::build(make_correction_trainer(member_cfg()), spec, data);
  CHECK(!ens.member_net(0).same_weights(ens.member_net(1)));
  CHECK(!ens.member_net(1).same_weights(ens.member_net(2)));
}

TEST_CASE("member spread grows with planted label noise") {
  int grew = 0;
  const int n_seeds = 10;
  for (int s = 0; s < n_seeds; ++s) {
    double spread[2];
    int idx = 0;
    for (double noise : {0.0, 0.5}) {
      const auto data = planted_errors(500, noise, 200 + s);
      EnsembleSpec spec;
      spec.n_members = 3;
      spec.perturb_seed = 300 + s;
      const auto ens =
          DepthErrorEnsemble::build(make_correction_trainer(member_cfg()), spec, data);
      Rng rng(400 + s);
      double acc = 0.0;
      for (int q = 0; q < 100; ++q) {
        const auto means = ens.member_means(ctx_of(rng, RegionClass::kReflection, 0.2));
        const auto [mu, s2] = ensemble_moments(means, 1e-9);
        (void)mu;
        acc += std::sqrt(s2);
      }
      spread[idx++] = acc / 100.0;
    }
    grew += spread[1] > spread[0];
  }
  CHECK(grew >= 8);  // over 10 seeds the noisier labels dominate
}

TEST_CASE("dropout members are deterministic fixed masks") {
  const auto data = planted_errors(500, 0.3, 13);
  EnsembleSpec spec;
  spec.n_members = 3;
  spec.mode = EnsembleSpec::Mode::kDropout;
  spec.dropout_p = 0.2;
  spec.perturb_seed = 17;
  const auto ens =
      DepthErrorEnsemble::build(make_correction_trainer(member_cfg()), spec, data);
  Rng rng(18);
  const auto c = ctx_of(rng, RegionClass::kClean, 0.2);
  const auto a = ens.member_means(c);
  const auto b = ens.member_means(c);
  CHECK(a == b);  // masks fixed per member
  // members differ from each other on most inputs
  int diff = 0;
  for (int q = 0; q < 50; ++q) {
    const auto m = ens.member_means(ctx_of(rng, RegionClass::kReflection, 0.2));
    diff += std::fabs(m[0] - m[1]) > 1e-12 || std::fabs(m[1] - m[2]) > 1e-12;
  }
  CHECK(diff >= 45);
}

TEST_CASE("sigma2 calibration recovers a known mixture variance") {
  Rng rng(21);
  const double true_s2 = 0.09;
  std::vector<std::vector<double>> preds;
  std::vector<double> errors;
  for (int i = 0; i < 10000; ++i) {
    // three member means around a context-dependent center
    const double center = rng.uniform(-1.0, 1.0);
    std::vector<double> m = {center - 0.05, center, center + 0.05};
    errors.push_back(m[rng.uniform_int(3)] + rng.normal(0.0, std::sqrt(true_s2)));
    preds.push_back(std::move(m));
  }
  const double s2 = calibrate_sigma2(preds, errors);
  CHECK(s2 >= 0.07);
  CHECK(s2 <= 0.11);
}

TEST_CASE("single member calibration approximates the sample variance") {
  Rng rng(22);
  std::vector<std::vector<double>> preds;
  std::vector<double> errors;
  for (int i = 0; i < 10000; ++i) {
    preds.push_back({0.0});
    errors.push_back(rng.normal(0.0, 0.7));
  }
  const double s2 = calibrate_sigma2(preds, errors);
  CHECK(s2 == doctest::Approx(0.49).epsilon(0.10));
}

TEST_CASE("calibrated sigma2 is a local minimum of the mixture NLL") {
  const auto data = planted_errors(800, 0.4, 23);
  EnsembleSpec spec;
  spec.n_members = 3;
  spec.perturb_seed = 29;
  const auto ens =
      DepthErrorEnsemble::build(make_correction_trainer(member_cfg()), spec, data);
  std::vector<std::vector<double>> preds;
  std::vector<double> errors;
  for (const auto& s : data) {
    preds.push_back(ens.member_means(s.context));
    errors.push_back(s.error_m);
  }
  const double s2 = calibrate_sigma2(preds, errors);
  const double at = mixture_nll(preds, errors, s2);
  CHECK(at <= mixture_nll(preds, errors, 10.0 * s2));
  CHECK(at <= mixture_nll(preds, errors, 0.1 * s2));
  // never worse than the uncalibrated default, by construction
  CHECK(at <= mixture_nll(preds, errors, 1e-4) + 1e-12);
}

TEST_CASE("empty calibration set is rejected") {
  CHECK_THROWS_AS(calibrate_sigma2({}, {}), std::invalid_argument);
}
