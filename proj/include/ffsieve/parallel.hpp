#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace ffsieve {

// Static block partition of [0, count).  Each index is processed exactly once
// and writes only its own outputs, so results are identical for any thread
// count.
template <typename Fn>
void parallelFor(std::int64_t count, unsigned threads, Fn&& fn) {
  if (count <= 0) return;
  unsigned usable = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                      std::min<std::int64_t>(count, 256))));
  if (usable == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(usable);
  std::int64_t chunk = (count + usable - 1) / usable;
  for (unsigned t = 0; t < usable; ++t) {
    std::int64_t lo = static_cast<std::int64_t>(t) * chunk;
    std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Worker cap from FFSIEVE_THREADS, falling back to hardware concurrency.
unsigned defaultThreadCount();

}  // namespace ffsieve
