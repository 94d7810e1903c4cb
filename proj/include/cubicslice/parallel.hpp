#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cubicslice {

// Thread count resolution: SLICE_THREADS env var wins, then the requested
// value, then hardware concurrency.
inline int resolve_threads(int requested = 0) {
  if (const char* env = std::getenv("SLICE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, count). Work is striped over threads so the
// assignment of indices to threads is fixed; results must be written to
// disjoint slots, which keeps output independent of the thread count.
template <class Fn>
void parallel_for(long count, int threads, Fn&& fn) {
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, count)));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=]() {
      for (long i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cubicslice
