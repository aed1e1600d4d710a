#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ponder {

/// 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

/// Calls fn(i, worker) for i in [0, n) on up to `workers` threads.
/// Work is handed out in fixed-size chunks; callers that need
/// worker-independent results must reduce per-index data or use exact
/// (integer) accumulation per worker. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn, std::size_t chunk = 256) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(1, (n + chunk - 1) / chunk)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&](unsigned w) {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) return;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) fn(i, w);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body, w);
  body(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Number of worker slots parallel_for may use for n items.
inline unsigned worker_slots(std::size_t n, unsigned workers, std::size_t chunk = 256) {
  return static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(1, (n + chunk - 1) / chunk)));
}

}  // namespace ponder
