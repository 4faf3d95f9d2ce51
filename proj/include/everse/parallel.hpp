#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace everse {

// Worker count: EVERSE_THREADS if set and positive, hardware otherwise.
inline int thread_count() {
  if (const char* env = std::getenv("EVERSE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static block partition of [0, n): thread k gets a contiguous range, so
// writes into preallocated slots land identically no matter the interleaving.
template <class F>
void parallel_for(int n, F&& body) {
  const int workers = std::min(thread_count(), n > 0 ? n : 1);
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int k = 0; k < workers; ++k) {
    const int lo = static_cast<int>(static_cast<long long>(n) * k / workers);
    const int hi = static_cast<int>(static_cast<long long>(n) * (k + 1) / workers);
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace everse
