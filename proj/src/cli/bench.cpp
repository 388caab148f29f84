#include "ipr/cli/bench.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "ipr/core/io.hpp"
#include "ipr/core/rng.hpp"

namespace ipr::cli {

std::string BenchReport::csv() const {
  std::ostringstream os;
  os << "method,mean_latency_us,model_bytes\n";
  for (const auto& r : rows)
    os << r.method << ',' << fmt17(r.mean_latency_us) << ',' << r.model_bytes << '\n';
  return os.str();
}

BenchReport bench_inference(const introspect::IntrospectionModel& single,
                            const baselines::DepthErrorEnsemble& ensemble, int n_queries,
                            uint64_t seed) {
  if (n_queries < 1) throw std::invalid_argument("bench_inference: n_queries >= 1 required");

  Rng rng(Rng::derive(seed, 0x62656e6368));
  std::vector<ContextFeatures> queries;
  queries.reserve(n_queries);
  for (int i = 0; i < n_queries; ++i) {
    queries.push_back(ContextFeatures::make(
        static_cast<RegionClass>(rng.uniform_int(kNumRegionClasses)), rng.uniform(),
        rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(0.05, 0.5)));
  }

  volatile double sink = 0.0;  // keep the calls from being optimized out
  using clock = std::chrono::steady_clock;

  const auto t0 = clock::now();
  for (const auto& q : queries) sink = sink + single.predict_cost(q);
  const auto t1 = clock::now();
  for (const auto& q : queries) {
    for (double m : ensemble.member_means(q)) sink = sink + m;
  }
  const auto t2 = clock::now();

  const double us_single =
      std::chrono::duration<double, std::micro>(t1 - t0).count() / n_queries;
  const double us_ens =
      std::chrono::duration<double, std::micro>(t2 - t1).count() / n_queries;

  BenchReport rep;
  rep.rows.push_back({"ipr", us_single, single.net().param_bytes()});
  rep.rows.push_back(
      {"ensemble-" + std::to_string(ensemble.n_members()), us_ens, ensemble.param_bytes()});
  rep.latency_ratio = us_single > 0.0 ? us_ens / us_single : 0.0;
  return rep;
}

}  // namespace ipr::cli
