#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace pindist {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(begin, end, worker) over contiguous chunks of [begin, end).
/// Workers write to disjoint slots; recombination is the deterministic join.
template <typename Fn>
void parallel_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  std::uint64_t total = end > begin ? end - begin : 0;
  if (threads <= 1 || total < 2 * threads) {
    if (total > 0) fn(begin, end, 0u);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::uint64_t chunk = (total + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    std::uint64_t lo = begin + w * chunk;
    if (lo >= end) break;
    std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
    pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pindist
