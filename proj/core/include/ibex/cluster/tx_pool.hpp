// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <deque>
#include <mutex>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex::cluster {

// Multi-producer single-consumer queue. The consumer sees transactions in
// the order their push calls completed.
class TxPool {
public:
  void push(Transaction tx) {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(tx));
  }

  void push_all(std::vector<Transaction> txs) {
    std::lock_guard lock(mu_);
    for (auto& tx : txs) queue_.push_back(std::move(tx));
  }

  std::vector<Transaction> pop_up_to(std::size_t max) {
    std::lock_guard lock(mu_);
    const std::size_t n = std::min(max, queue_.size());
    std::vector<Transaction> out(std::make_move_iterator(queue_.begin()),
                                 std::make_move_iterator(queue_.begin() + static_cast<std::ptrdiff_t>(n)));
    queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return queue_.size();
  }

private:
  mutable std::mutex mu_;
  std::deque<Transaction> queue_;
};

}  // namespace ibex::cluster
