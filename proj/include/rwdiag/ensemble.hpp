#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace rwdiag {

/// Evaluates fn(index) for index in [0, n) and returns the results in index
/// order. Work is split into contiguous chunks over `threads` workers; each
/// slot is written exactly once, so the output is identical for any thread
/// count (fn must be a pure function of its index).
template <class T, class Fn>
std::vector<T> ensemble_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<T> out(n);
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&out, &fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace rwdiag
