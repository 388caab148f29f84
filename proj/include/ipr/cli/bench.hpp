#pragma once

#include <string>
#include <vector>

#include "ipr/baselines/ensemble.hpp"
#include "ipr/introspect/model.hpp"

namespace ipr::cli {

struct BenchRow {
  std::string method;
  double mean_latency_us = 0.0;
  size_t model_bytes = 0;  // working-set estimate: parameter storage
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double latency_ratio = 0.0;  // ensemble / single introspector

  std::string csv() const;
};

// Wall-clock per-query latency of a single introspector vs an N-member
// ensemble over n_queries random contexts. Throws std::invalid_argument for
// n_queries < 1.
BenchReport bench_inference(const introspect::IntrospectionModel& single,
                            const baselines::DepthErrorEnsemble& ensemble, int n_queries,
                            uint64_t seed);

}  // namespace ipr::cli
