#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sibm {

// Process-wide worker cap for replicate loops. Results must be written to
// per-index slots so that the reduction order, and hence the output, does not
// depend on the thread count.
inline std::atomic<unsigned>& max_threads_slot() {
  static std::atomic<unsigned> value{0};  // 0 = hardware concurrency
  return value;
}

inline void set_max_threads(unsigned n) { max_threads_slot().store(n); }

inline unsigned max_threads() {
  unsigned n = max_threads_slot().load();
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  return n;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers = max_threads();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawn = static_cast<unsigned>(
      std::min<std::size_t>(workers, count));
  pool.reserve(spawn - 1);
  for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

}  // namespace sibm
