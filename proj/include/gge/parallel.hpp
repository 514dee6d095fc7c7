#pragma once

// Deterministic replicate runner: fn(r) writes into slot r only, threads take
// contiguous chunks, and callers reduce the slots in index order afterwards.
// Results are therefore independent of the schedule.

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace gge {

template <typename Fn>
void run_replicates(int reps, Fn&& fn, unsigned threads = 0) {
  if (reps <= 0) return;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(reps));
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (reps + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const int lo = static_cast<int>(t) * chunk;
    const int hi = std::min(reps, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi, t] {
      try {
        for (int r = lo; r < hi; ++r) fn(r);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gge
