#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace conekit {

/// Monte Carlo samples are drawn in fixed-size batches; batch b always uses
/// substream b of the caller's stream, so results do not depend on the
/// number of workers.
inline constexpr std::uint64_t kBatchSize = 4096;

inline std::uint64_t batch_count(std::uint64_t n) { return (n + kBatchSize - 1) / kBatchSize; }

/// Calls fn(i) for every i in [0, n) on up to `workers` threads. The first
/// exception thrown by any call is rethrown after all threads join.
template <class Fn>
void parallel_for(std::uint64_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace conekit
