#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perc {

// Runs fn(i) for every i in [0, trials), with up to `jobs` threads
// claiming indices atomically. fn must derive everything from i (per-trial
// RNG streams) and write only into trial i's preallocated slot; under that
// discipline results are identical for every job count, so serial and
// parallel runs agree byte for byte. The first exception from any worker
// stops the pool and is rethrown on the calling thread.
template <class Fn>
void for_each_trial(long long trials, int jobs, Fn&& fn) {
  if (trials <= 0) return;
  if (jobs <= 1 || trials == 1) {
    for (long long i = 0; i < trials; ++i) fn(i);
    return;
  }
  const int workers = (int)std::min<long long>(jobs, trials);
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      long long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= trials) return;
      try {
        fn(i);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
        next.store(trials, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve((size_t)workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace perc
