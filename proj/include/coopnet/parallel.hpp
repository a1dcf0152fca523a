#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace coopnet {

// Runs fn(block_index) for block_index in [0, n_blocks) on up to n_threads
// workers. Blocks are claimed from an atomic counter; callers combine
// per-block results in index order afterwards, so the outcome does not
// depend on the thread count.
inline void parallel_blocks(std::uint64_t n_blocks, int n_threads,
                            const std::function<void(std::uint64_t)>& fn) {
  if (n_threads <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  const int workers = (int)std::min<std::uint64_t>((std::uint64_t)n_threads, n_blocks);
  pool.reserve((std::size_t)workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

} // namespace coopnet
