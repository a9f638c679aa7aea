// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/sched/scheduler.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>

#include "ibex/common/lane_pool.hpp"
#include "ibex/merkle/staging_map.hpp"

namespace ibex::sched {

namespace {

class OverlayView : public StateView {
public:
  OverlayView(const merkle::StagingMap& overlay, const StateView& base) : overlay_(&overlay), base_(&base) {}
  std::optional<Value> get(const Address& key) const override {
    if (auto v = overlay_->get(key)) return v;
    return base_->get(key);
  }

private:
  const merkle::StagingMap* overlay_;
  const StateView* base_;
};

}  // namespace

SchedulerState::SchedulerState(const dag::DependencyGraph& g, const dag::ComponentSet& comps,
                               const std::set<ComponentId>& assigned)
    : remaining_(new std::atomic<std::uint32_t>[g.size()]), owned_(g.size()), done_(g.size()) {
  if (comps.comp_of.size() != g.size()) throw std::invalid_argument("component set does not match graph");
  for (ComponentId c : assigned) {
    if (c >= comps.count()) throw std::invalid_argument("assigned component out of range");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    remaining_[i].store(g.indegree()[i]);
    owned_[i] = assigned.contains(comps.comp_of[i]);
    if (owned_[i]) {
      ++owned_count_;
      if (g.indegree()[i] == 0) ready_.push(static_cast<TxId>(i));
    }
  }
}

TxId SchedulerState::pop_ready() {
  const TxId tx = ready_.top();
  ready_.pop();
  return tx;
}

std::vector<TxId> decrement_successors(SchedulerState& state, const dag::DependencyGraph& g, TxId completed) {
  if (state.done_[completed]) {
    throw std::logic_error("transaction " + std::to_string(completed) + " completed twice");
  }
  state.done_[completed] = true;
  ++state.done_count_;
  std::vector<TxId> ready;
  g.for_each_successor(completed, [&](TxId succ) {
    if (!state.owned_[succ]) return;
    if (state.remaining_[succ].fetch_sub(1) == 1) {
      ready.push_back(succ);
      state.ready_.push(succ);
    }
  });
  return ready;
}

ExecResult execute_contract(const Transaction& tx, const StateView& view) { return execute(tx.call, view); }

std::set<ComponentId> all_components(const dag::ComponentSet& comps) {
  std::set<ComponentId> out;
  for (ComponentId c = 0; c < comps.count(); ++c) out.insert(c);
  return out;
}

ExecutionReport execute_components(const Block& block, const dag::DependencyGraph& g,
                                   const dag::ComponentSet& comps,
                                   const std::set<ComponentId>& assigned, const StateView& base,
                                   std::size_t parallelism, const ExecOptions& options) {
  if (block.txs.size() != g.size()) throw std::invalid_argument("graph does not match block");
  SchedulerState state(g, comps, assigned);
  merkle::StagingMap overlay;
  const OverlayView view(overlay, base);

  ExecutionReport report;
  std::vector<std::size_t> comp_left(comps.count(), 0);
  std::vector<ComponentTiming> timing(comps.count());
  for (ComponentId c : assigned) {
    comp_left[c] = comps.size_of(c);
    timing[c].component = c;
    timing[c].tx_count = comps.size_of(c);
  }

  std::mutex mu;
  std::condition_variable cv;
  std::size_t in_flight = 0;
  std::exception_ptr error;
  const std::size_t total = state.owned_count();

  auto lane = [&] {
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return error || state.has_ready() || state.done_count() == total; });
      if (error || (state.done_count() == total)) return;
      const TxId tx = state.pop_ready();
      const ComponentId comp = comps.comp_of[tx];
      if (timing[comp].start == Clock::time_point{}) timing[comp].start = Clock::now();
      report.dispatch_order.push_back(tx);
      ++in_flight;
      lock.unlock();

      ExecResult result;
      try {
        if (options.before_execute) options.before_execute(tx);
        result = options.executor(block.txs[tx], view);
        if (const auto* d = std::get_if<StateDelta>(&result)) {
          for (const auto& [k, v] : d->writes()) overlay.put(k, v);
        }
      } catch (...) {
        lock.lock();
        --in_flight;
        if (!error) error = std::current_exception();
        cv.notify_all();
        return;
      }

      lock.lock();
      --in_flight;
      if (const auto* f = std::get_if<TxFailure>(&result)) report.failures.emplace_back(tx, *f);
      if (--comp_left[comp] == 0) timing[comp].end = Clock::now();
      const auto ready = decrement_successors(state, g, tx);
      if (state.done_count() == total) {
        cv.notify_all();
      } else {
        // This lane picks up one ready transaction itself on the next turn.
        for (std::size_t i = 1; i < ready.size(); ++i) cv.notify_one();
      }
      if (state.done_count() != total && !state.has_ready() && in_flight == 0) {
        error = std::make_exception_ptr(SchedulerError("scheduler stalled with no ready transaction"));
        cv.notify_all();
        return;
      }
    }
  };

  const std::size_t lanes = std::max<std::size_t>(1, std::min(parallelism, std::max<std::size_t>(total, 1)));
  LanePool::shared().run(lanes, [&](std::size_t) { lane(); });
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const SchedulerError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchedulerError(std::string("worker failed: ") + e.what());
    } catch (...) {
      throw SchedulerError("worker failed");
    }
  }

  report.dispatched = report.dispatch_order.size();
  report.delta = overlay.to_delta();
  std::sort(report.failures.begin(), report.failures.end());
  for (ComponentId c : assigned) report.timings.push_back(timing[c]);
  return report;
}

ExecutionReport execute_serial(const Block& block, const StateView& base, const ExecOptions& options) {
  merkle::StagingMap overlay;
  const OverlayView view(overlay, base);
  ExecutionReport report;
  for (const auto& tx : block.txs) {
    report.dispatch_order.push_back(tx.tx_id);
    const ExecResult result = options.executor(tx, view);
    if (const auto* d = std::get_if<StateDelta>(&result)) {
      for (const auto& [k, v] : d->writes()) overlay.put(k, v);
    } else {
      report.failures.emplace_back(tx.tx_id, std::get<TxFailure>(result));
    }
  }
  report.dispatched = block.txs.size();
  report.delta = overlay.to_delta();
  return report;
}

}  // namespace ibex::sched
