// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ibex/coord/event_loop.hpp"
#include "ibex/coord/fabric.hpp"
#include "ibex/coord/fault_plan.hpp"

namespace ibex::coord {

enum class Role : std::uint8_t { kFollower, kCandidate, kLeader };

std::string_view role_name(Role r);

struct ElectionOptions {
  SimTime timeout_min_ms = 150;
  SimTime timeout_max_ms = 300;
  SimTime heartbeat_ms = 50;
};

struct RequestVoteMsg {
  std::uint64_t term = 0;
  NodeId candidate = 0;
};
struct VoteMsg {
  std::uint64_t term = 0;
  bool granted = false;
};
struct HeartbeatMsg {
  std::uint64_t term = 0;
  NodeId leader = 0;
};

Bytes encode(const RequestVoteMsg& m);
Bytes encode(const VoteMsg& m);
Bytes encode(const HeartbeatMsg& m);
RequestVoteMsg decode_request_vote(ByteView b);
VoteMsg decode_vote(ByteView b);
HeartbeatMsg decode_heartbeat(ByteView b);

// Election half of RAFT for one node. Votes are granted first come first
// served, at most one per term; a strict majority of the membership wins.
class ElectionCore {
public:
  using Send = std::function<void(NodeId to, MessageKind kind, Bytes payload)>;

  ElectionCore(NodeId self, std::vector<NodeId> members);

  NodeId self() const { return self_; }
  Role role() const { return role_; }
  std::uint64_t term() const { return term_; }
  std::optional<NodeId> voted_for() const { return voted_for_; }
  std::optional<NodeId> leader() const { return leader_; }
  std::size_t majority() const { return members_.size() / 2 + 1; }
  const std::vector<NodeId>& members() const { return members_; }

  // Starts a new term as candidate. Returns true if that alone wins (n=1).
  bool start_election(const Send& send);
  // Returns true if this message made the node leader.
  bool on_message(const Message& msg, const Send& send);
  // Leader-only: heartbeat to every other member.
  void broadcast_heartbeat(const Send& send) const;
  // Adopts a newer term as follower.
  void observe_term(std::uint64_t term);
  // Leadership learned out of band (e.g. from the coordination store).
  void accept_leader(NodeId leader, std::uint64_t term);
  // Restart: volatile state cleared, term and vote kept.
  void restart();

private:
  NodeId self_;
  std::vector<NodeId> members_;
  Role role_ = Role::kFollower;
  std::uint64_t term_ = 0;
  std::optional<NodeId> voted_for_;
  std::optional<NodeId> leader_;
  std::set<NodeId> votes_;
};

struct ElectionSetup {
  std::vector<NodeId> members;
  std::set<NodeId> crashed;  // down from the start
  FaultPlan faults;          // timed crash/restart events
  FabricOptions fabric;
  ElectionOptions options;
  std::uint64_t start_term = 0;
  std::uint64_t seed = 1;
  SimTime deadline_ms = 10'000;
};

struct ElectionResult {
  std::optional<NodeId> leader;
  std::uint64_t term = 0;
  SimTime elapsed_ms = 0;
  // Every node that became leader, per term. Safety means size <= 1.
  std::map<std::uint64_t, std::set<NodeId>> leaders_by_term;
  std::uint64_t highest_term = 0;
  bool safe = true;
};

// Runs elections on a simulated fabric until some live leader is known by
// every live member, or the deadline passes.
ElectionResult elect_leader(const ElectionSetup& setup);

}  // namespace ibex::coord
