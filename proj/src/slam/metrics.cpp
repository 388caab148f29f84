#include "ipr/slam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ipr/core/rng.hpp"

namespace ipr::slam {

RpeResult rpe(const sim::Trajectory& estimated, const sim::Trajectory& reference,
              double d_meters, const std::vector<int>& exclude_frames) {
  if (estimated.size() != reference.size() || estimated.frame_ids != reference.frame_ids)
    throw std::invalid_argument("rpe: trajectories not time-aligned");
  if (!(d_meters > 0.0)) throw std::invalid_argument("rpe: d > 0 required");
  const auto cum = sim::cumulative_lengths(reference);
  if (cum.back() < d_meters)
    throw std::invalid_argument("rpe: trajectory shorter than evaluation distance");

  const std::set<int> excluded(exclude_frames.begin(), exclude_frames.end());
  const int n = static_cast<int>(reference.size());
  double sum_t2 = 0.0;
  double sum_r2 = 0.0;
  int pairs = 0;
  int j = 0;
  for (int i = 0; i < n; ++i) {
    if (j < i + 1) j = i + 1;
    while (j < n && cum[j] - cum[i] < d_meters) ++j;
    if (j >= n) break;
    const double dist = cum[j] - cum[i];
    bool touched = false;
    for (int f = i; f <= j && !touched; ++f)
      touched = excluded.count(reference.frame_ids[f]) > 0;
    if (touched) continue;

    const Pose3 rel_ref = reference.poses[i].inverse() * reference.poses[j];
    const Pose3 rel_est = estimated.poses[i].inverse() * estimated.poses[j];
    const Pose3 err = rel_ref.inverse() * rel_est;
    const double te = err.translation.norm() / dist;              // drift per meter
    const double re = so3_log(err.rotation).norm() / dist;        // rad per meter
    sum_t2 += te * te;
    sum_r2 += re * re;
    ++pairs;
  }
  RpeResult out;
  out.n_pairs = pairs;
  if (pairs > 0) {
    out.trans_err_pct = 100.0 * std::sqrt(sum_t2 / pairs);
    out.rot_err_deg_per_m = 180.0 / 3.14159265358979323846 * std::sqrt(sum_r2 / pairs);
  }
  return out;
}

MdbfResult mdbf(const std::vector<int>& failure_frames, const sim::Trajectory& reference) {
  MdbfResult out;
  const double len = sim::path_length(reference);
  out.no_failures = failure_frames.empty();
  out.meters = len / static_cast<double>(failure_frames.size() + 1);
  return out;
}

namespace {

std::vector<double> prefix_mean_curve(const std::vector<double>& mags,
                                      const std::vector<size_t>& order,
                                      const std::vector<size_t>& grid) {
  std::vector<double> curve;
  curve.reserve(grid.size());
  double acc = 0.0;
  size_t k = 0;
  for (size_t g : grid) {
    while (k < g) {
      acc += mags[order[k]];
      ++k;
    }
    curve.push_back(acc / static_cast<double>(k));
  }
  return curve;
}

}  // namespace

SortingCurve sorting_curve(const std::vector<std::pair<double, double>>& scored, int trials,
                           uint64_t seed) {
  const size_t n = scored.size();
  if (n < 10) throw std::invalid_argument("sorting_curve: >= 10 features required");
  if (trials < 1) throw std::invalid_argument("sorting_curve: trials >= 1 required");

  std::vector<double> mags(n);
  for (size_t i = 0; i < n; ++i) mags[i] = scored[i].second;

  // evaluation grid: top 1% .. 100% in 100 steps (at least one feature)
  std::vector<size_t> grid;
  for (int pct = 1; pct <= 100; ++pct)
    grid.push_back(std::max<size_t>(1, static_cast<size_t>(pct * n / 100)));

  SortingCurve out;
  for (size_t g : grid)
    out.top_fraction.push_back(static_cast<double>(g) / static_cast<double>(n));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto by_true = order;
  std::stable_sort(by_true.begin(), by_true.end(),
                   [&](size_t a, size_t b) { return mags[a] < mags[b]; });
  out.ideal = prefix_mean_curve(mags, by_true, grid);

  auto by_pred = order;
  std::stable_sort(by_pred.begin(), by_pred.end(),
                   [&](size_t a, size_t b) { return scored[a].first < scored[b].first; });
  out.predicted = prefix_mean_curve(mags, by_pred, grid);

  std::vector<double> rnd_sum(grid.size(), 0.0);
  std::vector<double> rnd_sum2(grid.size(), 0.0);
  Rng rng(Rng::derive(seed, 0x736f7274));
  auto shuffled = order;
  for (int t = 0; t < trials; ++t) {
    for (size_t i = n; i-- > 1;) std::swap(shuffled[i], shuffled[rng.uniform_int(i + 1)]);
    const auto curve = prefix_mean_curve(mags, shuffled, grid);
    for (size_t g = 0; g < grid.size(); ++g) {
      rnd_sum[g] += curve[g];
      rnd_sum2[g] += curve[g] * curve[g];
    }
  }
  out.random.resize(grid.size());
  out.random_std.resize(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    out.random[g] = rnd_sum[g] / trials;
    const double var = std::max(0.0, rnd_sum2[g] / trials - out.random[g] * out.random[g]);
    out.random_std[g] = std::sqrt(var);
  }

  const auto area = [](const std::vector<double>& c) {
    double a = 0.0;
    for (double v : c) a += v;
    return a / static_cast<double>(c.size());
  };
  out.area_ideal = area(out.ideal);
  out.area_predicted = area(out.predicted);
  out.area_random = area(out.random);
  return out;
}

}  // namespace ipr::slam
