#include "npoint/parallel.hpp"

#include <atomic>

namespace npoint {

namespace {
std::atomic<unsigned> configured_threads{0};
}

void set_thread_count(unsigned count) noexcept { configured_threads.store(count); }

unsigned thread_count() noexcept {
  const unsigned c = configured_threads.load();
  if (c != 0) return c;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace npoint
