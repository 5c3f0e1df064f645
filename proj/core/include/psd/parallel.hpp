#pragma once

// Ordered block-parallel map: block i's result lands in slot i no matter
// which worker computed it, so downstream concatenation and reductions are
// independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace psd {

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(i) for i in [0, blocks) on up to `jobs` threads and returns the
/// results in index order. The first exception by block index is rethrown.
template <class T, class F>
std::vector<T> ordered_block_map(std::size_t blocks, int jobs, F&& fn) {
  std::vector<T> results(blocks);
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), blocks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < blocks; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < blocks; i = next.fetch_add(1)) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace psd
