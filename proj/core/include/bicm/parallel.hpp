#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bicm {

/// Worker count for data-parallel loops. BICM_THREADS overrides; 0 or unset
/// means all hardware threads.
inline int worker_count() {
  static const int n = [] {
    if (const char* env = std::getenv("BICM_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
  }();
  return n;
}

namespace detail {
inline thread_local bool g_inside_parallel = false;
}

/// Runs fn(block_index) for block_index in [0, n_blocks). Work is pulled from
/// an atomic counter, so results must be written to per-block slots; callers
/// then reduce over blocks in index order, which makes the final result
/// independent of scheduling and thread count. Nested calls run inline on
/// the calling worker.
template <class Fn>
void parallel_blocks(std::int64_t n_blocks, Fn&& fn) {
  const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), n_blocks));
  if (workers <= 1 || detail::g_inside_parallel) {
    for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    detail::g_inside_parallel = true;
    for (;;) {
      const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 0; t < workers - 1; ++t) pool.emplace_back(run);
  run();
  detail::g_inside_parallel = false;
  for (auto& t : pool) t.join();
}

}  // namespace bicm
