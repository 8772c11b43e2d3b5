#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace satd {

// Runs fn(i) for i in [0, n) split into contiguous chunks across up to
// `parallelism` threads. fn must only touch index-owned state; results land
// in caller-owned, pre-sized storage, which keeps output independent of the
// thread count. The first exception thrown by any chunk is rethrown.
inline void parallel_for(std::size_t n, int parallelism,
                         const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t threads =
      parallelism > 1
          ? std::min<std::size_t>(static_cast<std::size_t>(parallelism), n)
          : 1;
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace satd
