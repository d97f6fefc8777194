#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace besovdh {

/// Process-wide cap on worker threads (the CLI --jobs flag). 1 = serial.
inline int& worker_cap() {
  static int cap = 1;
  return cap;
}

/// Index-parallel loop. Results must be written to per-index slots so the
/// outcome is identical for every worker count.
template <typename Fn>
void parallel_for(std::int64_t count, Fn&& fn) {
  const int jobs = std::clamp<int>(worker_cap(), 1, int(std::thread::hardware_concurrency()));
  if (jobs <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace besovdh
