#pragma once

// Deterministic data parallelism: the index range is cut into fixed chunks,
// workers pull chunks from an atomic counter, and results are merged in
// chunk order, so output is identical for every jobs setting (including 1,
// which runs inline). The first exception in chunk order wins.

#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tropcross {

inline int resolve_jobs(int jobs) {
  if (jobs < 0) throw std::invalid_argument("jobs must be >= 0");
  if (jobs == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    jobs = static_cast<int>(hw == 0 ? 1 : (hw > 8 ? 8 : hw));
  }
  return jobs;
}

template <typename T, typename Fn>
std::vector<T> parallel_chunk_map(std::size_t total, int jobs, std::size_t chunk_size,
                                  Fn&& fn) {
  jobs = resolve_jobs(jobs);
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = total == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<T> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks || abort.load(std::memory_order_relaxed)) break;
      const std::size_t lo = c * chunk_size;
      const std::size_t hi = lo + chunk_size < total ? lo + chunk_size : total;
      try {
        results[c] = fn(lo, hi);
      } catch (...) {
        errors[c] = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
      }
    }
  };

  if (jobs <= 1 || chunks <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int nthreads = static_cast<int>(chunks) < jobs ? static_cast<int>(chunks) : jobs;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace tropcross
