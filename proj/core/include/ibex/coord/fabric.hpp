// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ibex/common/bytes.hpp"
#include "ibex/common/rng.hpp"
#include "ibex/coord/event_loop.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::coord {

enum class MessageKind : std::uint8_t {
  kRequestVote,
  kVote,
  kHeartbeat,
  kBlockAnnounce,
  kComponentAssign,
  kControl,
  kComponentDone,
  kStateDeltaShip,
  kHalt,
};

std::string_view kind_name(MessageKind k);

struct Message {
  NodeId from = 0;
  NodeId to = 0;
  MessageKind kind = MessageKind::kHeartbeat;
  Bytes payload;
};

struct FabricOptions {
  SimTime min_delay_ms = 1;
  SimTime max_delay_ms = 5;
  double drop_probability = 0.0;
  std::uint64_t seed = 1;
  bool trace = false;

  // Zero latency, lossless. Used when timings come from the wall clock.
  static FabricOptions direct() { return {0, 0, 0.0, 1, false}; }
};

// Seeded message fabric. Each directed link is FIFO; delays are drawn
// uniformly from [min_delay_ms, max_delay_ms]. Messages to a crashed node are
// lost at delivery time.
class Fabric {
public:
  using Handler = std::function<void(const Message&)>;

  Fabric(EventLoop& loop, FabricOptions options);

  void attach(NodeId node, Handler handler);
  void set_up(NodeId node, bool up);
  bool is_up(NodeId node) const { return up_.contains(node); }

  void send(Message msg);

  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t delivered_bytes() const { return delivered_bytes_; }
  std::uint64_t delivered_bytes(MessageKind k) const;
  // One line per delivered message when tracing is on.
  const std::vector<std::string>& trace() const { return trace_; }
  void note(std::string line);

private:
  EventLoop* loop_;
  FabricOptions options_;
  Rng rng_;
  std::unordered_map<NodeId, Handler> handlers_;
  std::unordered_set<NodeId> up_;
  std::map<std::pair<NodeId, NodeId>, SimTime> link_tail_;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t delivered_bytes_ = 0;
  std::map<MessageKind, std::uint64_t> bytes_by_kind_;
  std::vector<std::string> trace_;
};

}  // namespace ibex::coord
