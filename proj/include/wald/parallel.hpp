#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wald::detail {

/// Runs body(begin, end) over contiguous chunks of [0, count) on `workers`
/// threads. Chunks write to disjoint outputs, so the result never depends on
/// the worker count. The first exception thrown by any chunk is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (count == 0) return;
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, count);
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = count / threads;
    const std::size_t extra = count % threads;
    std::size_t begin = 0;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t end = begin + chunk + (t < extra ? 1 : 0);
      pool.emplace_back([&, t, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
      begin = end;
    }
  }
  for (auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

}  // namespace wald::detail
