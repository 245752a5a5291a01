#pragma once

// Deterministic fan-out helper. Work items are identified by index and must
// write only to their own preallocated slot; any reduction is done
// sequentially in index order by the caller after the join. Output is then
// identical for every worker count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace omegasum {

inline int default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// fn(index, worker_id); worker_id < workers lets callers keep one scratch
// object (caches, evaluators) per thread.
inline void parallel_for_wid(int64_t count, int workers,
                             const std::function<void(int64_t, int)>& fn) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  if (workers > count) workers = static_cast<int>(count);
  std::atomic<int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count || failed.load(std::memory_order_relaxed)) return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline void parallel_for(int64_t count, int workers,
                         const std::function<void(int64_t)>& fn) {
  parallel_for_wid(count, workers, [&](int64_t i, int) { fn(i); });
}

}  // namespace omegasum
