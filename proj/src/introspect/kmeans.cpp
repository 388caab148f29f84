#include "ipr/introspect/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "ipr/core/rng.hpp"

namespace ipr::introspect {

KMeansResult cluster_failures(const std::vector<ContextFeatures>& contexts, int k,
                              uint64_t seed) {
  const int n = static_cast<int>(contexts.size());
  if (k < 1) throw std::invalid_argument("cluster_failures: k >= 1 required");
  if (k > n) throw std::invalid_argument("cluster_failures: k exceeds sample count");

  std::vector<Eigen::VectorXd> pts;
  pts.reserve(n);
  for (const auto& c : contexts) pts.push_back(c.vec());

  ipr::Rng rng(ipr::Rng::derive(seed, 0x6b6d65616e73));
  KMeansResult res;
  res.centroids.reserve(k);

  // k-means++ seeding
  res.centroids.push_back(pts[rng.uniform_int(n)]);
  std::vector<double> d2(n, 0.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& cen : res.centroids)
        best = std::min(best, (pts[i] - cen).squaredNorm());
      d2[i] = best;
      total += best;
    }
    int pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.uniform_int(n));  // all points coincide
    }
    res.centroids.push_back(pts[pick]);
  }

  res.assignment.assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    res.iterations = iter + 1;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (pts[i] - res.centroids[c]).squaredNorm();
        if (d < best) {
          best = d;
          res.assignment[i] = c;
        }
      }
    }

    std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(pts[0].size()));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[res.assignment[i]] += pts[i];
      ++counts[res.assignment[i]];
    }

    double max_shift = 0.0;
    for (int c = 0; c < k; ++c) {
      Eigen::VectorXd next;
      if (counts[c] == 0) {
        // re-seed an emptied cluster at the point farthest from its centroid
        int far_i = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = (pts[i] - res.centroids[c]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        next = pts[far_i];
      } else {
        next = sums[c] / counts[c];
      }
      max_shift = std::max(max_shift, (next - res.centroids[c]).norm());
      res.centroids[c] = std::move(next);
    }
    if (max_shift < 1e-6) break;
  }
  return res;
}

}  // namespace ipr::introspect
