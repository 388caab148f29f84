#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ipr {

// Seeded RNG used wherever the simulator or a trainer injects randomness.
// Uniform and normal variates are generated in-house (not via std::
// distributions, whose output is implementation-defined) so that sampled
// sequences are reproducible bit-for-bit for a given seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(mix(seed)) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal, Box-Muller with one cached variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

  uint64_t raw() { return gen_(); }

  // Seed for an independent stream identified by (seed, tag). Lets per-frame
  // and per-worker generators run concurrently with reproducible output.
  static uint64_t derive(uint64_t seed, uint64_t tag) {
    return mix(seed ^ mix(tag + 0x9e3779b97f4a7c15ULL));
  }

 private:
  // splitmix64 finalizer.
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ipr
