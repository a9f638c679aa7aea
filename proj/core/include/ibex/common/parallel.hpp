// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ibex {

// Splits [0, total) into ceil(total / workers) sized chunks and runs
// fn(worker, begin, end) for each non-empty chunk on its own thread. The
// first exception thrown by any worker is rethrown after all have joined.
template <typename Fn>
void run_chunked(std::size_t total, std::size_t workers, Fn&& fn) {
  if (total == 0) return;
  workers = std::max<std::size_t>(1, workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  if (workers == 1 || chunk >= total) {
    fn(std::size_t{0}, std::size_t{0}, total);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= total) break;
    const std::size_t end = std::min(begin + chunk, total);
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ibex
