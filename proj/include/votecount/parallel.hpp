#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace votecount {

inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* cap = std::getenv("VOTE_COUNT_THREADS")) {
    long c = std::atol(cap);
    if (c >= 1 && static_cast<unsigned>(c) < n) n = static_cast<unsigned>(c);
  }
  return n;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// the combined output is independent of the thread schedule.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace votecount
