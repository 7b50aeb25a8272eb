#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nctopos {

  // Runs body(i) for i in [0, n) on up to `jobs` threads. Callers write into
  // per-index slots so merged results keep canonical order. The first
  // exception thrown by any worker is rethrown.
  template <typename Body>
  void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
    jobs = std::max(1U, jobs);
    if (jobs == 1 || n < 2) {
      for (std::size_t i = 0; i < n; ++i) {
        body(i);
      }
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       error;
    std::mutex               error_lock;
    auto                     worker = [&] {
      while (true) {
        std::size_t const i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(error_lock);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < std::min<std::size_t>(jobs, n); ++k) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
    if (error) {
      std::rethrow_exception(error);
    }
  }

}  // namespace nctopos
