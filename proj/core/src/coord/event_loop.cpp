// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/coord/event_loop.hpp"

#include <algorithm>

namespace ibex::coord {

void EventLoop::schedule_at(SimTime at, std::function<void()> fn) {
  queue_.push(Event{std::max(at, now_), seq_++, std::move(fn)});
}

bool EventLoop::step() {
  if (queue_.empty()) return false;
  // The handler may schedule more events, so move it out before popping.
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = ev.at;
  ++executed_;
  ev.fn();
  return true;
}

void EventLoop::run_until(SimTime deadline) {
  while (!queue_.empty() && queue_.top().at <= deadline) step();
  now_ = std::max(now_, deadline);
}

bool EventLoop::run_until(const std::function<bool()>& pred, SimTime deadline) {
  while (!pred()) {
    if (queue_.empty() || queue_.top().at > deadline) return pred();
    step();
  }
  return true;
}

}  // namespace ibex::coord
