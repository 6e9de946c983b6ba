#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pplab {

/// Worker-count cap shared by all node-parallel loops. 0 = hardware default.
void set_max_threads(int n);
int max_threads();

/// Deterministic parallel map: the range is cut into fixed-size chunks
/// (independent of the thread count) and each chunk writes only its own
/// slice, so results do not depend on scheduling.
template <typename F>
void parallel_for(std::int64_t n, F&& body, std::int64_t grain = 1 << 14) {
  if (n <= 0) return;
  int workers = max_threads();
  if (workers <= 1 || n <= grain) {
    body(0, n);
    return;
  }
  std::int64_t chunks = (n + grain - 1) / grain;
  std::atomic<std::int64_t> next{0};
  auto run = [&]() {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::int64_t b = c * grain;
      std::int64_t e = std::min(n, b + grain);
      body(b, e);
    }
  };
  std::vector<std::thread> pool;
  int nt = static_cast<int>(std::min<std::int64_t>(workers, chunks));
  pool.reserve(nt - 1);
  for (int t = 1; t < nt; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace pplab
