#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ipr/core/rng.hpp"
#include "ipr/gp/costmap.hpp"
#include "ipr/gp/gp_model.hpp"

using namespace ipr;
using namespace ipr::gp;

namespace {

// Independent oracle: Gauss-Jordan inversion of the full Gram matrix,
// written from the textbook posterior formulas with no shared code path.
struct DenseOracle {
  std::vector<Eigen::Vector2d> xs;
  std::vector<double> ys;
  GpKernel k;
  std::vector<std::vector<double>> kinv;
  double mean = 0.0;

  static std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      std::swap(a[piv], a[col]);
      std::swap(inv[piv], inv[col]);
      const double d = a[col][col];
      for (int c = 0; c < n; ++c) {
        a[col][c] /= d;
        inv[col][c] /= d;
      }
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col];
        for (int c = 0; c < n; ++c) {
          a[r][c] -= f * a[col][c];
          inv[r][c] -= f * inv[col][c];
        }
      }
    }
    return inv;
  }

  void fit() {
    const int n = static_cast<int>(xs.size());
    mean = 0.0;
    for (double y : ys) mean += y;
    mean /= n;
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double d2 = (xs[i] - xs[j]).squaredNorm();
        gram[i][j] = k.sigma_f2 * std::exp(-d2 / (2.0 * k.length * k.length)) +
                     (i == j ? k.sigma_n2 : 0.0);
      }
    kinv = invert(gram);
  }

  std::pair<double, double> predict(const Eigen::Vector2d& q) const {
    const int n = static_cast<int>(xs.size());
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i)
      ks[i] = k.sigma_f2 * std::exp(-(q - xs[i]).squaredNorm() / (2.0 * k.length * k.length));
    double m = 0.0;
    double v = k.sigma_f2;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += kinv[i][j] * (ys[j] - mean);
      m += ks[i] * acc;
      double accv = 0.0;
      for (int j = 0; j < n; ++j) accv += kinv[i][j] * ks[j];
      v -= ks[i] * accv;
    }
    return {mean + m, v};
  }
};

}  // namespace

TEST_CASE("gp interpolates a single sample in the noiseless limit") {
  GpKernel k;
  k.sigma_n2 = 1e-10;
  const auto m = GpModel::fit({{100.0, 100.0}}, {0.7}, k);
  const auto p = m.predict({100.0, 100.0});
  CHECK(p.mean == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(p.var < 1e-6);
}

TEST_CASE("gp rejects empty input and duplicate inputs with zero noise") {
  GpKernel k;
  CHECK_THROWS_AS(GpModel::fit({}, {}, k), std::invalid_argument);
  k.sigma_n2 = 0.0;
  CHECK_THROWS_AS(GpModel::fit({{1, 1}, {1, 1}}, {0.0, 1.0}, k), std::runtime_error);
}

TEST_CASE("two symmetric samples: query at the midpoint averages the targets") {
  GpKernel k;
  k.sigma_n2 = 1e-8;
  const auto m = GpModel::fit({{0.0, 0.0}, {20.0, 0.0}}, {0.2, 0.8}, k);
  const auto p = m.predict({10.0, 0.0});
  // symmetry makes the posterior mean the average regardless of lengthscale
  CHECK(p.mean == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("far queries recover the prior") {
  GpKernel k;
  const auto m = GpModel::fit({{0, 0}, {10, 10}, {5, 3}}, {0.2, 0.4, 0.9}, k);
  const auto p = m.predict({5000.0, 5000.0});
  CHECK(p.mean == doctest::Approx(m.prior_mean()).epsilon(1e-9));
  CHECK(p.var == doctest::Approx(k.sigma_f2).epsilon(1e-6));
}

TEST_CASE("observations reduce the posterior variance") {
  GpKernel k;
  const auto m = GpModel::fit({{50, 50}}, {0.5}, k);
  CHECK(m.predict({50, 50}).var < k.sigma_f2);
}

TEST_CASE("gp posterior matches the dense oracle on random configurations") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(50));
    DenseOracle oracle;
    oracle.k.sigma_f2 = rng.uniform(0.05, 1.0);
    oracle.k.length = rng.uniform(5.0, 120.0);
    oracle.k.sigma_n2 = rng.uniform(1e-4, 0.1);
    for (int i = 0; i < n; ++i) {
      oracle.xs.emplace_back(rng.uniform(0, 640), rng.uniform(0, 480));
      oracle.ys.push_back(rng.uniform(0.0, 1.0));
    }
    oracle.fit();
    const auto model = GpModel::fit(oracle.xs, oracle.ys, oracle.k);
    for (int q = 0; q < 5; ++q) {
      const Eigen::Vector2d query(rng.uniform(-50, 690), rng.uniform(-50, 530));
      const auto [om, ov] = oracle.predict(query);
      const auto p = model.predict(query);
      CHECK(std::fabs(p.mean - om) < 1e-8);
      CHECK(std::fabs(p.var - ov) < 1e-8);
    }
  }
}

TEST_CASE("posterior variance never exceeds the prior variance") {
  Rng rng(43);
  GpKernel k;
  std::vector<Eigen::Vector2d> xs;
  std::vector<double> ys;
  for (int i = 0; i < 60; ++i) {
    xs.emplace_back(rng.uniform(0, 640), rng.uniform(0, 480));
    ys.push_back(rng.uniform(0.0, 1.0));
  }
  const auto m = GpModel::fit(xs, ys, k);
  for (int q = 0; q < 500; ++q) {
    const auto p = m.predict({rng.uniform(-100, 740), rng.uniform(-100, 580)});
    CHECK(p.var <= k.sigma_f2 + 1e-9);
    CHECK(p.var >= 0.0);
  }
}

TEST_CASE("costmap with no samples is unmasked and zero") {
  CameraIntrinsics intr;
  GpKernel k;
  const auto cm = build_costmap({}, intr, k, 8, 0.125);
  CHECK(cm.grid.maxCoeff() == 0.0);
  bool any = false;
  for (int v = 0; v < cm.mask.rows(); ++v)
    for (int u = 0; u < cm.mask.cols(); ++u) any = any || cm.mask(v, u);
  CHECK(!any);
}

TEST_CASE("costmap around a single strong sample decays with distance") {
  CameraIntrinsics intr;
  GpKernel k;  // sigma_f2 0.25, length 40
  const Eigen::Vector2d center(320, 240);
  std::vector<std::pair<Eigen::Vector2d, double>> samples = {{center, 0.8}};
  // generous variance threshold masks in a wide neighborhood
  const auto cm = build_costmap(samples, intr, k, 4, 0.249);
  CHECK(cm.masked_in(center));
  const double at_center = cm.at(center);
  const double at_20 = cm.at({340, 240});
  const double at_60 = cm.at({380, 240});
  CHECK(at_center >= at_20);
  CHECK(at_20 >= at_60);
  CHECK(at_center >= 0.6);
  CHECK(at_center <= 0.8 + 1e-9);

  // grid is clamped to [0,1] everywhere
  CHECK(cm.grid.minCoeff() >= 0.0);
  CHECK(cm.grid.maxCoeff() <= 1.0);
}

TEST_CASE("costmap of zero-valued samples is zero where masked") {
  CameraIntrinsics intr;
  GpKernel k;
  std::vector<std::pair<Eigen::Vector2d, double>> samples;
  Rng rng(5);
  for (int i = 0; i < 40; ++i)
    samples.push_back({{rng.uniform(0, 640), rng.uniform(0, 480)}, 0.0});
  const auto cm = build_costmap(samples, intr, k, 8, 0.125);
  for (int v = 0; v < cm.grid.rows(); v += 16)
    for (int u = 0; u < cm.grid.cols(); u += 16)
      if (cm.mask(v, u)) CHECK(cm.grid(v, u) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("costmap stride validation") {
  CameraIntrinsics intr;
  CHECK_THROWS_AS(build_costmap({}, intr, GpKernel{}, 0, 0.1), std::invalid_argument);
}
