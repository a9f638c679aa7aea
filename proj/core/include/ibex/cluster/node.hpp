// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ibex/cluster/assignment.hpp"
#include "ibex/cluster/cluster_sim.hpp"
#include "ibex/cluster/messages.hpp"
#include "ibex/cluster/tx_pool.hpp"
#include "ibex/common/rng.hpp"
#include "ibex/coord/election.hpp"
#include "ibex/coord/event_loop.hpp"
#include "ibex/coord/fabric.hpp"
#include "ibex/coord/fault_plan.hpp"
#include "ibex/coord/keyspace.hpp"
#include "ibex/dag/components.hpp"
#include "ibex/dag/graph.hpp"
#include "ibex/domain/signature.hpp"
#include "ibex/merkle/concurrent_tree.hpp"
#include "ibex/merkle/store.hpp"

namespace ibex::cluster {

class Node;

// Everything the nodes of one simulated cluster share: the clock, the
// fabric, the coordination store, and the harness's observation points.
struct SimContext {
  SimContext(ClusterConfig cfg, std::uint64_t seed, bool trace);

  ClusterConfig config;
  coord::EventLoop loop;
  coord::Fabric fabric;
  coord::KeySpace keys;
  Rng rng;
  std::vector<NodeId> members;
  std::vector<BlockInput> inputs;
  TxPool pool;
  KeyedDigestSigner verifier;
  std::unique_ptr<coord::FaultInjector> injector;
  std::map<NodeId, std::unique_ptr<Node>> nodes;

  std::map<std::uint64_t, BlockOutcome> outcomes;
  std::map<std::uint64_t, std::map<NodeId, double>> exec_wall_ms;
  std::vector<std::string> events;
  std::vector<std::pair<NodeId, std::uint64_t>> leaders;
  std::uint64_t reassignments = 0;
  std::uint64_t state_bytes = 0;
  std::uint64_t divergences = 0;
  bool halted = false;
  bool finished = false;
  std::string halt_reason;

  std::size_t quorum() const { return members.size() / 2 + 1; }
  void log(const std::string& line);
  void crash(NodeId id);
  void restart(NodeId id);
  void phase(std::string_view name, std::uint64_t height);
};

// Key space layout.
namespace paths {
inline constexpr std::string_view kMembers = "/members/";
inline constexpr std::string_view kPending = "/block/pending";
inline constexpr std::string_view kCommitted = "/committed";
std::string member(NodeId id);
std::string assign(std::uint64_t height);
std::string state_prefix(std::uint64_t height);
std::string state(std::uint64_t height, NodeId node);
std::string merged(std::uint64_t height);
std::string chain(std::uint64_t height);
}  // namespace paths

class Node {
public:
  Node(SimContext& ctx, NodeId id, const StateDelta& genesis);

  NodeId id() const { return id_; }
  bool up() const { return up_; }
  coord::Role role() const { return up_ ? core_.role() : coord::Role::kFollower; }
  std::uint64_t term() const { return core_.term(); }
  std::uint64_t height() const { return height_; }
  Digest root() const { return tree_.get_root_hash(); }
  bool healthy() const { return healthy_; }

  void start();
  void crash();
  void restart();
  void on_message(const coord::Message& m);

private:
  using Clock = std::chrono::steady_clock;

  struct LeaderBlock {
    std::uint64_t height = 0;
    Block block;
    bool validation = false;
    std::vector<DroppedTx> dropped;
    dag::ComponentSet comps;
    Assignment assignment;
    std::vector<NodeId> executors;
    std::set<ComponentId> done;
    std::map<NodeId, StateDeltaShip> deltas;
    std::set<NodeId> failed;
    bool finish_sent = false;
    PhaseTimings timings;
    Clock::time_point started;
  };

  struct FollowerBlock {
    std::uint64_t height = 0;
    NodeId leader = 0;
    Block block;
    dag::DependencyGraph graph;
    dag::ComponentSet comps;
    std::uint64_t version = 0;
    std::set<ComponentId> assigned;
    std::set<ComponentId> executed;
    std::set<ComponentId> running;
    StateDelta delta;
    bool started = false;
    bool finished = false;
    bool merged = false;
  };

  template <class F>
  void guarded(F&& f);
  template <class F>
  auto coord_call(F&& f);
  void marker(std::string_view phase);
  template <class F>
  auto phase(double PhaseTimings::*slot, F&& f);

  void send(NodeId to, coord::MessageKind kind, Bytes payload);
  void renew(std::uint64_t epoch);
  void arm_election();
  void on_leader_event(const coord::WatchEvent& ev);
  void become_leader();
  void step_down();
  void catch_up();
  void commit_local(const Block& block, const StateDelta& delta);

  // Leader side.
  void lead_next();
  void start_block();
  void on_member_event(const coord::WatchEvent& ev);
  void on_done(const coord::Message& m);
  void on_follower_delta(const StateDeltaShip& ship);
  void on_state_event(const coord::WatchEvent& ev);
  void check_progress();
  void merge_and_commit();
  void halt(const std::string& reason);
  std::vector<NodeId> live_members();

  // Follower side.
  void on_announce(const coord::Message& m);
  void on_assign(const ComponentAssign& a);
  void on_control(const coord::Message& m);
  void on_merged(const StateDeltaShip& ship);
  void run_assigned();
  void ship_delta();

  SimContext& ctx_;
  NodeId id_;
  bool up_ = true;
  bool healthy_ = true;
  std::uint64_t epoch_ = 0;
  std::uint64_t election_gen_ = 0;
  coord::ElectionCore core_;
  std::optional<NodeId> leader_;
  coord::LeaseId member_lease_ = 0;
  coord::LeaseId leader_lease_ = 0;
  bool leading_ = false;

  std::unique_ptr<merkle::MemoryStore> store_;
  merkle::ConcurrentMerkleTree tree_;
  std::uint64_t height_ = 0;
  Digest last_hash_{};

  std::optional<LeaderBlock> lb_;
  std::optional<FollowerBlock> fb_;
  double coord_ms_ = 0;
};

}  // namespace ibex::cluster
