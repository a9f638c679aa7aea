// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ibex {

// Persistent threads for blocking lanes. run(n, fn) calls fn(0..n-1)
// concurrently, lane 0 on the caller, and returns when all lanes have. Lanes
// may block on each other, so every lane gets its own thread. Calls from
// different threads are serialized; a call from inside a lane falls back to
// fresh threads.
class LanePool {
public:
  LanePool() = default;
  ~LanePool();
  LanePool(const LanePool&) = delete;
  LanePool& operator=(const LanePool&) = delete;

  static LanePool& shared();

  // The first exception thrown by a lane is rethrown after all returned.
  void run(std::size_t lanes, const std::function<void(std::size_t)>& fn);

  std::size_t threads() const;

private:
  void worker();
  void grow(std::size_t workers);

  std::mutex run_mu_;
  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t next_lane_ = 0;
  std::size_t want_ = 0;
  std::size_t remaining_ = 0;
  std::exception_ptr error_;
  bool stop_ = false;
};

}  // namespace ibex
