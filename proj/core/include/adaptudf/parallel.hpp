#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adaptudf {

/// Resolve a requested worker count; 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Run body(begin, end) over [0, count) split into contiguous chunks, one per
/// worker. Results must be written to per-index slots: chunk boundaries depend
/// on the worker count, so no body may accumulate across indices into shared
/// state. The first exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = resolve_workers(workers);
  if (count == 0) return;
  const std::size_t chunks = std::min<std::size_t>(workers, count);
  if (chunks <= 1) {
    body(std::size_t{0}, count);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace adaptudf
