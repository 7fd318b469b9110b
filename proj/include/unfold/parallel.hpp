#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace unfold {

// Worker count: UNFOLD_THREADS wins over hardware concurrency. Results of
// parallel loops must be written to preallocated per-index slots so the
// outcome is independent of scheduling; reductions happen sequentially
// afterwards. That keeps every artifact byte-identical across thread counts.
inline unsigned worker_count() {
  if (const char* env = std::getenv("UNFOLD_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(i) for i in [0, n) on a work-stealing counter. fn must only touch
// slot i of shared state (plus thread-local scratch via the worker id passed
// as second argument).
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t, unsigned)>& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error = nullptr;
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace unfold
