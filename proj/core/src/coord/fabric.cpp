// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/coord/fabric.hpp"

#include <algorithm>
#include <stdexcept>

namespace ibex::coord {

std::string_view kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::kRequestVote: return "RequestVote";
    case MessageKind::kVote: return "Vote";
    case MessageKind::kHeartbeat: return "Heartbeat";
    case MessageKind::kBlockAnnounce: return "BlockAnnounce";
    case MessageKind::kComponentAssign: return "ComponentAssign";
    case MessageKind::kControl: return "Control";
    case MessageKind::kComponentDone: return "ComponentDone";
    case MessageKind::kStateDeltaShip: return "StateDeltaShip";
    case MessageKind::kHalt: return "Halt";
  }
  return "Unknown";
}

Fabric::Fabric(EventLoop& loop, FabricOptions options) : loop_(&loop), options_(options), rng_(options.seed) {
  if (options_.min_delay_ms < 0 || options_.max_delay_ms < options_.min_delay_ms) {
    throw std::invalid_argument("fabric delay range is invalid");
  }
}

void Fabric::attach(NodeId node, Handler handler) {
  handlers_[node] = std::move(handler);
  up_.insert(node);
}

void Fabric::set_up(NodeId node, bool up) {
  if (up) {
    up_.insert(node);
  } else {
    up_.erase(node);
  }
}

void Fabric::note(std::string line) {
  if (options_.trace) trace_.push_back(std::move(line));
}

void Fabric::send(Message msg) {
  if (!up_.contains(msg.from)) return;
  if (options_.drop_probability > 0 && rng_.chance(options_.drop_probability)) {
    ++dropped_;
    return;
  }
  const SimTime delay = options_.max_delay_ms > options_.min_delay_ms
                            ? rng_.between(options_.min_delay_ms, options_.max_delay_ms)
                            : options_.min_delay_ms;
  SimTime& tail = link_tail_[{msg.from, msg.to}];
  const SimTime at = std::max(loop_->now() + delay, tail);
  tail = at;
  loop_->schedule_at(at, [this, msg = std::move(msg)] {
    if (!up_.contains(msg.to)) {
      ++dropped_;
      return;
    }
    const auto it = handlers_.find(msg.to);
    if (it == handlers_.end()) {
      ++dropped_;
      return;
    }
    ++delivered_;
    delivered_bytes_ += msg.payload.size();
    bytes_by_kind_[msg.kind] += msg.payload.size();
    if (options_.trace) {
      trace_.push_back("t=" + std::to_string(loop_->now()) + " " + std::to_string(msg.from) + "->" +
                       std::to_string(msg.to) + " " + std::string(kind_name(msg.kind)) + " " +
                       std::to_string(msg.payload.size()));
    }
    it->second(msg);
  });
}

std::uint64_t Fabric::delivered_bytes(MessageKind k) const {
  const auto it = bytes_by_kind_.find(k);
  return it == bytes_by_kind_.end() ? 0 : it->second;
}

}  // namespace ibex::coord
