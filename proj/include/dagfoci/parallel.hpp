#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace dagfoci::parallel {

// Process-wide worker cap; 0 means hardware concurrency. Results never depend
// on it: parallel_for uses a static index partition and bodies write only to
// their own slot, so any worker count produces identical output.
inline std::atomic<unsigned>& worker_slot() {
  static std::atomic<unsigned> w{0};
  return w;
}

inline void set_workers(unsigned n) { worker_slot().store(n); }

inline unsigned workers() {
  unsigned w = worker_slot().load();
  if (w != 0) return w;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {
inline bool& in_region() {
  thread_local bool f = false;
  return f;
}
}  // namespace detail

// Runs body(i) for i in [0, count). Nested calls run serially so outer loops
// (benchmark runs) keep exclusive use of the workers.
template <class F>
void parallel_for(std::size_t count, F&& body) {
  if (count == 0) return;
  unsigned w = workers();
  if (w > count) w = static_cast<unsigned>(count);
  if (w <= 1 || detail::in_region()) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex err_mu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    std::size_t begin = count * t / w;
    std::size_t end = count * (t + 1) / w;
    pool.emplace_back([&, begin, end] {
      detail::in_region() = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace dagfoci::parallel
