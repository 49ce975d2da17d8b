#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace ridgeline {

// Runs fn(begin, end) over a static contiguous partition of [0, n).
// Callers must write results into per-index slots only; with that rule the
// output is identical for every thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t t =
      std::min<std::size_t>(std::max(threads, 1), n);
  if (t <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ridgeline
