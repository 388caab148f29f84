#pragma once

#include <cstdint>
#include <vector>

#include "ipr/core/types.hpp"

namespace ipr::introspect {

struct KMeansResult {
  std::vector<int> assignment;              // one entry per input
  std::vector<Eigen::VectorXd> centroids;   // k entries
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Runs until the largest centroid
// shift drops below 1e-6 or 100 iterations; an emptied cluster is re-seeded
// at the point farthest from its centroid. Deterministic per seed.
// Throws std::invalid_argument for k < 1 or k > number of points.
KMeansResult cluster_failures(const std::vector<ContextFeatures>& contexts, int k,
                              uint64_t seed);

}  // namespace ipr::introspect
