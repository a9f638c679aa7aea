// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "ibex/dag/components.hpp"
#include "ibex/dag/graph.hpp"
#include "ibex/domain/contracts.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::sched {

using Clock = std::chrono::steady_clock;
using dag::ComponentId;

class SchedulerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ComponentTiming {
  ComponentId component = 0;
  std::size_t tx_count = 0;
  Clock::time_point start{};
  Clock::time_point end{};
};

// Indegree bookkeeping for the transactions of the components one worker
// owns. A transaction becomes ready when all its predecessors completed.
class SchedulerState {
public:
  SchedulerState(const dag::DependencyGraph& g, const dag::ComponentSet& comps,
                 const std::set<ComponentId>& assigned);

  bool owns(TxId tx) const { return owned_[tx]; }
  std::size_t owned_count() const { return owned_count_; }

  // Ready transactions, lowest tx id first.
  bool has_ready() const { return !ready_.empty(); }
  TxId pop_ready();
  void push_ready(TxId tx) { ready_.push(tx); }

  std::uint32_t remaining(TxId tx) const { return remaining_[tx].load(); }
  bool done(TxId tx) const { return done_[tx]; }
  std::size_t done_count() const { return done_count_; }

private:
  friend std::vector<TxId> decrement_successors(SchedulerState&, const dag::DependencyGraph&, TxId);

  std::unique_ptr<std::atomic<std::uint32_t>[]> remaining_;
  std::vector<bool> owned_;
  std::vector<bool> done_;
  std::size_t owned_count_ = 0;
  std::size_t done_count_ = 0;
  std::priority_queue<TxId, std::vector<TxId>, std::greater<>> ready_;
};

// Marks `completed` done and decrements each owned successor once. Returns
// the successors that reached zero (they are also pushed to the ready
// queue). Completing a transaction twice throws std::logic_error.
std::vector<TxId> decrement_successors(SchedulerState& state, const dag::DependencyGraph& g,
                                       TxId completed);

using Executor = std::function<ExecResult(const Transaction&, const StateView&)>;

ExecResult execute_contract(const Transaction& tx, const StateView& view);

struct ExecOptions {
  Executor executor = execute_contract;
  // Called on the lane thread before each transaction runs.
  std::function<void(TxId)> before_execute;
};

struct ExecutionReport {
  StateDelta delta;
  std::vector<std::pair<TxId, TxFailure>> failures;  // sorted by tx id
  std::vector<TxId> dispatch_order;
  std::vector<ComponentTiming> timings;  // sorted by component id
  std::size_t dispatched = 0;
};

// Runs every transaction of the assigned components on `parallelism` lanes,
// each transaction only after all its predecessors. Reads see earlier writes
// of the same run first, then `base`. The merged delta equals executing the
// same transactions serially in ascending tx id order.
ExecutionReport execute_components(const Block& block, const dag::DependencyGraph& g,
                                   const dag::ComponentSet& comps,
                                   const std::set<ComponentId>& assigned, const StateView& base,
                                   std::size_t parallelism, const ExecOptions& options = {});

std::set<ComponentId> all_components(const dag::ComponentSet& comps);

// Serial reference: ascending tx id over the given view, applying each
// successful delta before the next call.
ExecutionReport execute_serial(const Block& block, const StateView& base, const ExecOptions& options = {});

}  // namespace ibex::sched
