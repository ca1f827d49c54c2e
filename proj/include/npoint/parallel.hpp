#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "npoint/real.hpp"

namespace npoint {

/// Worker count for parallel loops; 0 means std::thread::hardware_concurrency().
void set_thread_count(unsigned count) noexcept;
unsigned thread_count() noexcept;

/// Calls body(i) for i in [0, count). Each index is handled by exactly one worker, and workers
/// inherit the caller's working precision, so any per-index output is independent of scheduling.
/// The first exception thrown by a worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const Precision bits = working_precision();
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        PrecisionGuard guard(bits);
        try {
          for (std::size_t i = w; i < count; i += workers) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace npoint
