#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ipr::cli {

// Run fn(i) for i in [0, n) on a small worker pool. Each index owns its
// output slot, so results are deterministic regardless of scheduling.
template <typename Fn>
void parallel_for_index(size_t n, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<size_t>(hw, n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ipr::cli
