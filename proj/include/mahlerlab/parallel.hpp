#pragma once
#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mahlerlab {

//! Worker count to use when the caller passes 0.
inline unsigned default_workers() {
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

//! Run fn(i) for every i in [0, count) on `workers` threads. Blocks are
//! claimed dynamically but every result lives in its own slot, so output
//! never depends on scheduling. If any call throws, the exception of the
//! lowest failing index is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn &&fn) {
  if (workers == 0)
    workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      // Keep going after a failure so the reported error is the lowest
      // index, independent of timing.
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(run);
    for (auto &t : pool)
      t.join();
  }
  if (failed)
    for (auto &e : errors)
      if (e)
        std::rethrow_exception(e);
}

} // namespace mahlerlab
