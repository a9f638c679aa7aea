// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace ibex::coord {

// Simulated milliseconds.
using SimTime = std::int64_t;

// Single-threaded discrete-event loop driving the simulated clock. Events at
// the same instant run in scheduling order.
class EventLoop {
public:
  SimTime now() const { return now_; }

  void schedule_at(SimTime at, std::function<void()> fn);
  void schedule_after(SimTime delay, std::function<void()> fn) { schedule_at(now_ + delay, std::move(fn)); }

  // Runs the next event. Returns false when the queue is empty.
  bool step();
  // Runs all events up to and including `deadline`, then sets now to it.
  void run_until(SimTime deadline);
  // Runs events until pred() holds (checked after each event) or the next
  // event lies past `deadline`. Returns pred().
  bool run_until(const std::function<bool()>& pred, SimTime deadline);

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

private:
  struct Event {
    SimTime at;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace ibex::coord
