// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ibex/common/bytes.hpp"
#include "ibex/dag/components.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::cluster {

using dag::ComponentId;

struct BlockAnnounce {
  std::uint64_t height = 0;
  bool validation = false;
  Bytes block;  // canonical block encoding
  std::vector<std::vector<TxId>> components;

  friend bool operator==(const BlockAnnounce&, const BlockAnnounce&) = default;
};

struct ComponentAssign {
  std::uint64_t height = 0;
  std::uint64_t version = 0;
  std::vector<std::pair<ComponentId, NodeId>> owners;  // ascending component id

  friend bool operator==(const ComponentAssign&, const ComponentAssign&) = default;
};

enum class ControlKind : std::uint8_t { kStart, kFinish, kCommit };

struct Control {
  std::uint64_t height = 0;
  ControlKind kind = ControlKind::kStart;
  Digest root{};  // set for kCommit

  friend bool operator==(const Control&, const Control&) = default;
};

struct ComponentDone {
  std::uint64_t height = 0;
  ComponentId component = 0;

  friend bool operator==(const ComponentDone&, const ComponentDone&) = default;
};

// A follower's writes for the components it executed, or the leader's
// merged delta when `merged` is set.
struct StateDeltaShip {
  std::uint64_t height = 0;
  NodeId from = 0;
  bool merged = false;
  std::vector<ComponentId> components;
  Bytes delta;  // canonical delta encoding

  friend bool operator==(const StateDeltaShip&, const StateDeltaShip&) = default;
};

struct Halt {
  std::uint64_t height = 0;
  std::string reason;

  friend bool operator==(const Halt&, const Halt&) = default;
};

Bytes encode(const BlockAnnounce& m);
Bytes encode(const ComponentAssign& m);
Bytes encode(const Control& m);
Bytes encode(const ComponentDone& m);
Bytes encode(const StateDeltaShip& m);
Bytes encode(const Halt& m);

BlockAnnounce decode_announce(ByteView b);
ComponentAssign decode_assign(ByteView b);
Control decode_control(ByteView b);
ComponentDone decode_done(ByteView b);
StateDeltaShip decode_ship(ByteView b);
Halt decode_halt(ByteView b);

}  // namespace ibex::cluster
