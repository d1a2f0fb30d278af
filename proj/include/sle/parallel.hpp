#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sle {

inline int worker_count() {
  if (const char* env = std::getenv("SAMPLOGIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Each index writes only its own result
// slot, so aggregation stays deterministic regardless of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  const int used = static_cast<int>(std::min<std::size_t>(workers, count));
  threads.reserve(used);
  for (int w = 0; w < used; ++w) {
    threads.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += used) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace sle
