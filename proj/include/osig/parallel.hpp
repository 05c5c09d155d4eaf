#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace osig {

// Parallel map over [0, n). Work items must be independent; results are
// written to disjoint slots so the schedule never affects the output.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || n < 64) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned k = std::min<unsigned>(hw, 8);
  pool.reserve(k);
  for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace osig
