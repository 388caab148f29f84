#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ipr/core/error_dist.hpp"
#include "ipr/core/io.hpp"
#include "ipr/core/pose.hpp"
#include "ipr/core/rng.hpp"
#include "ipr/core/stats.hpp"
#include "ipr/core/types.hpp"

using namespace ipr;

namespace {

Pose3 random_pose(Rng& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return {q, Eigen::Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5))};
}

// independent chi-square CDF from closed forms: erf for one degree of
// freedom, the finite Poisson sum for even degrees
double chi2_cdf_oracle(double x, int k) {
  if (k == 1) return std::erf(std::sqrt(0.5 * x));
  REQUIRE(k % 2 == 0);
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < k / 2; ++j) {
    term *= 0.5 * x / j;
    sum += term;
  }
  return 1.0 - std::exp(-0.5 * x) * sum;
}

}  // namespace

TEST_CASE("compose_error on scalars and vectors") {
  CHECK(compose_error(5.0, 5.0) == 0.0);
  CHECK(compose_error(4.2, 5.0) == doctest::Approx(-0.8));
  Eigen::VectorXd a(2), b(2);
  a << 3, 4;
  b << 0, 0;
  const Eigen::VectorXd e = compose_error(a, b);
  CHECK(e(0) == 3.0);
  CHECK(e(1) == 4.0);
  CHECK(e.norm() == doctest::Approx(5.0));
  Eigen::VectorXd c(3);
  CHECK_THROWS_AS(compose_error(a, c), std::invalid_argument);
}

TEST_CASE("compose_error is antisymmetric") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-10, 10);
    const double y = rng.uniform(-10, 10);
    CHECK(compose_error(x, y) == -compose_error(y, x));
    CHECK(compose_error(x, x) == 0.0);
  }
}

TEST_CASE("dist_pdf piecewise") {
  // uniform inside the accurate band only: normalization forces 1/(2 alpha)
  PiecewiseDist uniform_t;
  uniform_t.alpha = 1.0;
  uniform_t.r_max = 10.0;
  uniform_t.theta_t = 1.0 / (2.0 * uniform_t.alpha);
  uniform_t.theta_fp = 0.0;
  uniform_t.theta_fn = 0.0;
  CHECK(dist_pdf(uniform_t, 0.0) == doctest::Approx(0.5));

  // p_FP = p_FN = 0.25, p_T = 0.5 mapped through the density parameterization
  PiecewiseDist p;
  p.alpha = 1.0;
  p.r_max = 10.0;
  p.theta_fp = 0.25 / 9.0;
  p.theta_fn = 0.25 / 9.0;
  p.theta_t = 0.5 / 2.0;
  CHECK(dist_pdf(p, 5.0) == doctest::Approx(0.25 / 9.0));  // 0.02778 by hand
  CHECK(dist_pdf(p, -5.0) == doctest::Approx(0.25 / 9.0));
  CHECK(dist_pdf(p, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(dist_pdf(p, 10.0), std::domain_error);
  CHECK_THROWS_AS(dist_pdf(p, -12.0), std::domain_error);
}

TEST_CASE("dist_pdf gaussian matches the standard normal table") {
  CHECK(dist_pdf(GaussianDist{0.0, 1.0}, 0.0) == doctest::Approx(0.3989).epsilon(1e-3));
}

TEST_CASE("piecewise normalization invariant holds for any probability split") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
    const double s = a + b + c;
    a /= s;
    b /= s;
    c /= s;
    const double alpha = rng.uniform(0.2, 2.0);
    const double r_max = alpha + rng.uniform(1.0, 15.0);
    PiecewiseDist d;
    d.alpha = alpha;
    d.r_max = r_max;
    d.theta_fp = a / (r_max - alpha);
    d.theta_fn = b / (r_max - alpha);
    d.theta_t = c / (2.0 * alpha);
    const double total = d.theta_fp * (r_max - alpha) + d.theta_t * 2.0 * alpha +
                         d.theta_fn * (r_max - alpha);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_NOTHROW(validate(ParametricErrorDist{d}));
  }
}

TEST_CASE("huber density integrates to one") {
  for (double theta : {0.5, 1.0, 2.5}) {
    const HuberDist d{theta};
    // trapezoid over the effective support
    const double hi = theta + 60.0 / theta;
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = -hi + 2.0 * hi * i / n;
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += w * dist_pdf(d, x);
    }
    acc *= 2.0 * hi / n;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("pose group axioms hold on random pose pairs") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Pose3 a = random_pose(rng);
    const Pose3 b = random_pose(rng);
    const Pose3 c = random_pose(rng);
    CHECK(std::fabs(a.rotation.norm() - 1.0) < 1e-9);

    const Pose3 ab_c = (a * b) * c;
    const Pose3 a_bc = a * (b * c);
    CHECK((ab_c.translation - a_bc.translation).norm() < 1e-9);
    CHECK(ab_c.rotation.angularDistance(a_bc.rotation) < 1e-9);

    const Pose3 ident = a * a.inverse();
    CHECK(ident.translation.norm() < 1e-9);
    CHECK(ident.rotation.angularDistance(Eigen::Quaterniond::Identity()) < 1e-9);
  }
}

TEST_CASE("so3 exp/log round trip") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    // stay inside the principal ball |phi| < pi where log inverts exp
    Eigen::Vector3d phi(rng.normal(), rng.normal(), rng.normal());
    phi *= rng.uniform(0.0, 3.1) / phi.norm();
    const Eigen::Vector3d back = so3_log(so3_exp(phi));
    CHECK((phi - back).norm() < 1e-9);
  }
}

TEST_CASE("chi-square quantile matches an independent integration oracle") {
  const double q = chi2_quantile(0.95, 6);
  CHECK(q == doctest::Approx(12.592).epsilon(1e-3));  // frozen reference value
  CHECK(chi2_cdf_oracle(q, 6) == doctest::Approx(0.95).epsilon(1e-6));
  for (int dof : {1, 2, 4, 8}) {
    for (double p : {0.5, 0.9, 0.99}) {
      const double x = chi2_quantile(p, dof);
      CHECK(chi2_cdf_oracle(x, dof) == doctest::Approx(p).epsilon(1e-6));
    }
  }
}

TEST_CASE("normal log pdf reference values") {
  CHECK(-normal_log_pdf(0.0) == doctest::Approx(0.9189385).epsilon(1e-6));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("error sample invariants") {
  const auto ctx = ContextFeatures::make(RegionClass::kShadow, 0.4, 0.1, 0.5, 0.5, 0.2);
  Eigen::VectorXd e(2);
  e << 3, 4;
  const auto s = ErrorSample::make(ctx, e, SampleSource::kSpatioTemporal, 12);
  CHECK(std::fabs(s.magnitude - s.error.norm()) < 1e-12);
  CHECK_THROWS_AS(ErrorSample::make(ctx, e, SampleSource::kCrossSensor, -1),
                  std::invalid_argument);
  Eigen::VectorXd bad(1);
  bad << std::nan("");
  CHECK_THROWS_AS(ErrorSample::make(ctx, bad, SampleSource::kCrossSensor, 0),
                  std::invalid_argument);
}

TEST_CASE("context features layout") {
  const auto ctx = ContextFeatures::make(RegionClass::kReflection, 0.7, 0.3, 0.25, 0.75, 0.1);
  CHECK(ctx.dim() == 8);
  CHECK(ctx.region() == RegionClass::kReflection);
  CHECK(ctx.vec()(1) == 1.0);
  CHECK(ctx.vec()(3) == 0.7);
  const auto clean = ContextFeatures::make(RegionClass::kClean, 0.1, 0.9, 0.5, 0.5, 0.2);
  CHECK(clean.region() == RegionClass::kClean);
  CHECK(clean.vec().head<3>().norm() == 0.0);
}

TEST_CASE("error sample csv round trip is bit exact") {
  Rng rng(21);
  std::vector<ErrorSample> samples;
  for (int i = 0; i < 50; ++i) {
    const auto ctx = ContextFeatures::make(
        static_cast<RegionClass>(rng.uniform_int(kNumRegionClasses)), rng.uniform(),
        rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(0.01, 1.0));
    Eigen::VectorXd e(2);
    e << rng.normal(0, 3), rng.normal(0, 3);
    samples.push_back(ErrorSample::make(
        ctx, e, i % 2 ? SampleSource::kCrossSensor : SampleSource::kSpatioTemporal, i));
  }
  const std::string csv = error_samples_to_csv(samples);
  const auto back = error_samples_from_csv(csv);
  REQUIRE(back.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    CHECK(std::memcmp(back[i].context.vec().data(), samples[i].context.vec().data(),
                      sizeof(double) * samples[i].context.dim()) == 0);
    CHECK(std::memcmp(back[i].error.data(), samples[i].error.data(),
                      sizeof(double) * samples[i].error.size()) == 0);
    CHECK(back[i].magnitude == samples[i].magnitude);
    CHECK(back[i].frame_id == samples[i].frame_id);
    CHECK(back[i].source == samples[i].source);
  }
  // writing again reproduces the same bytes
  CHECK(error_samples_to_csv(back) == csv);

  const std::string js = error_samples_to_json(samples);
  const auto back_js = error_samples_from_json(js);
  REQUIRE(back_js.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    CHECK(back_js[i].magnitude == samples[i].magnitude);
    CHECK(std::memcmp(back_js[i].error.data(), samples[i].error.data(),
                      sizeof(double) * samples[i].error.size()) == 0);
  }
}

TEST_CASE("scalar error samples serialize with one err column") {
  const auto ctx = ContextFeatures::make(RegionClass::kClean, 0.2, 0.8, 0.1, 0.1, 0.3);
  std::vector<ErrorSample> samples = {
      ErrorSample::make(ctx, Eigen::VectorXd::Constant(1, -2.0), SampleSource::kCrossSensor, 0)};
  const std::string csv = error_samples_to_csv(samples);
  CHECK(csv.find("err_0,magnitude") != std::string::npos);
  CHECK(csv.find("err_1") == std::string::npos);
  const auto back = error_samples_from_csv(csv);
  CHECK(back[0].error.size() == 1);
  CHECK(back[0].error(0) == -2.0);
}
