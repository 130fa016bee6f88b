#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vecf {

/// Worker count from VECF_THREADS if set, else 1.
inline int default_thread_count() {
  if (const char* s = std::getenv("VECF_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

/// Calls fn(i) for i in [0, n). Indices are split into contiguous blocks, one
/// per worker, so each index is always handled by the same code path and the
/// caller's per-index outputs do not depend on the worker count. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace vecf
