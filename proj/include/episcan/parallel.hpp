// Deterministic parallel-for: work items are independent, each writes only
// its own output slot, so results do not depend on the thread count.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace episcan {

// fn(item_index, worker_index); worker_index < threads can index per-worker
// scratch. threads <= 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t n_items, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n_items <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) fn(i, 0u);
    return;
  }
  if (threads > n_items) threads = static_cast<unsigned>(n_items);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::atomic_flag error_latch = ATOMIC_FLAG_INIT;
  std::exception_ptr first_error;

  auto worker = [&](unsigned worker_index) {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_items || failed.load(std::memory_order_relaxed)) break;
      try {
        fn(i, worker_index);
      } catch (...) {
        if (!error_latch.test_and_set()) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace episcan
