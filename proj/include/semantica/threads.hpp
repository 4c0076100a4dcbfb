#pragma once

// Sweep parallelism helper. SEMANTICA_THREADS caps the number of worker
// threads; results are written into preallocated slots so output order (and
// therefore every CSV byte) is independent of scheduling.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace semantica {

inline unsigned sweep_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SEMANTICA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), 256u);
    } catch (...) {
    }
  }
  return hw;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers =
      std::min<unsigned>(sweep_threads(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace semantica
