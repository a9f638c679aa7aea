// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ibex/coord/event_loop.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::coord {

class FaultPlanError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class FaultAction : std::uint8_t { kCrash, kRestart };

struct FaultTarget {
  enum class Kind : std::uint8_t { kNode, kLeader, kFollower };
  Kind kind = Kind::kNode;
  NodeId node = 0;

  friend bool operator==(const FaultTarget&, const FaultTarget&) = default;
};

// Either a phase marker (optionally pinned to a block height) or a delay
// from the moment the plan is armed.
struct FaultEvent {
  FaultTarget target;
  FaultAction action = FaultAction::kCrash;
  std::optional<std::string> phase;
  std::optional<std::uint64_t> height;
  SimTime after_ms = 0;

  friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

// Phase markers reached by the leader protocol, in protocol order.
const std::vector<std::string_view>& fault_phases();

// Text form, one event per line, '#' comments:
//   crash <id|leader|follower> at <phase>[@<height>]
//   crash <id|leader|follower> at +<ms>
//   restart <id> at +<ms>
struct FaultPlan {
  std::vector<FaultEvent> events;

  bool empty() const { return events.empty(); }

  static FaultPlan parse(std::istream& in);
  static FaultPlan parse_string(std::string_view text);
  static FaultPlan load(const std::filesystem::path& path);
  std::string to_text() const;

  // Throws FaultPlanError if a numeric target is not a member.
  void validate(const std::vector<NodeId>& members) const;
};

// Fires a plan's events. Timed events are scheduled when armed; phase
// events fire at most once, on the first matching marker.
class FaultInjector {
public:
  struct Hooks {
    std::function<void(NodeId)> crash;
    std::function<void(NodeId)> restart;
    std::function<std::optional<NodeId>()> leader;
    std::function<std::vector<NodeId>()> live_followers;
  };

  FaultInjector(EventLoop& loop, FaultPlan plan, const std::vector<NodeId>& members, Hooks hooks);

  void arm();
  void on_phase(std::string_view phase, std::uint64_t height);

  std::size_t fired() const { return fired_count_; }
  const std::vector<std::string>& log() const { return log_; }

private:
  void fire(std::size_t i);

  EventLoop* loop_;
  FaultPlan plan_;
  Hooks hooks_;
  std::vector<bool> fired_;
  std::size_t fired_count_ = 0;
  std::vector<std::string> log_;
};

}  // namespace ibex::coord
