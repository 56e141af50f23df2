// parallel.hpp: index-ordered parallel map over trials.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adamfind {

/// out[i] = fn(i) for i in [0, count), evaluated on up to `threads` workers.
/// Output order is the index order regardless of scheduling. The first
/// exception thrown by any worker is rethrown after all workers stop.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::uint64_t count, unsigned threads, Fn&& fn) {
  std::vector<Result> out(count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const auto workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, std::max<std::uint64_t>(count, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace adamfind
