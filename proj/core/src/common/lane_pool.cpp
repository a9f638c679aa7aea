// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/common/lane_pool.hpp"

#include <exception>

namespace ibex {

namespace {
thread_local bool t_in_lane = false;

void run_fresh(std::size_t lanes, const std::function<void(std::size_t)>& fn) {
  std::exception_ptr error;
  std::mutex error_mu;
  auto guarded = [&](std::size_t lane) {
    try {
      fn(lane);
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(lanes - 1);
  for (std::size_t i = 1; i < lanes; ++i) threads.emplace_back(guarded, i);
  guarded(0);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}
}  // namespace

LanePool& LanePool::shared() {
  static LanePool pool;
  return pool;
}

LanePool::~LanePool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

std::size_t LanePool::threads() const {
  std::lock_guard lock(mu_);
  return threads_.size();
}

void LanePool::grow(std::size_t workers) {
  while (threads_.size() < workers) threads_.emplace_back([this] { worker(); });
}

void LanePool::worker() {
  t_in_lane = true;
  std::unique_lock lock(mu_);
  for (;;) {
    work_cv_.wait(lock, [&] { return stop_ || (job_ && next_lane_ < want_); });
    if (stop_) return;
    const std::size_t lane = next_lane_++;
    const auto* job = job_;
    lock.unlock();
    std::exception_ptr err;
    try {
      (*job)(lane);
    } catch (...) {
      err = std::current_exception();
    }
    lock.lock();
    if (err && !error_) error_ = err;
    if (--remaining_ == 0) done_cv_.notify_all();
  }
}

void LanePool::run(std::size_t lanes, const std::function<void(std::size_t)>& fn) {
  if (lanes == 0) return;
  if (lanes == 1) {
    fn(0);
    return;
  }
  if (t_in_lane) {
    run_fresh(lanes, fn);
    return;
  }
  std::lock_guard serial(run_mu_);
  {
    std::lock_guard lock(mu_);
    grow(lanes - 1);
    job_ = &fn;
    next_lane_ = 1;
    want_ = lanes;
    remaining_ = lanes - 1;
    error_ = nullptr;
  }
  for (std::size_t i = 1; i < lanes; ++i) work_cv_.notify_one();

  std::exception_ptr mine;
  t_in_lane = true;
  try {
    fn(0);
  } catch (...) {
    mine = std::current_exception();
  }
  t_in_lane = false;

  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [&] { return remaining_ == 0; });
  job_ = nullptr;
  want_ = 0;
  std::exception_ptr err = mine ? mine : error_;
  error_ = nullptr;
  lock.unlock();
  if (err) std::rethrow_exception(err);
}

}  // namespace ibex
