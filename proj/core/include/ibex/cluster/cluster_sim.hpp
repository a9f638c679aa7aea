// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ibex/cluster/block_producer.hpp"
#include "ibex/cluster/config.hpp"
#include "ibex/coord/fault_plan.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::cluster {

struct PhaseTimings {
  double coordination_ms = 0;
  double production_ms = 0;
  double detection_ms = 0;
  double assign_ms = 0;
  double state_ms = 0;
  double execution_ms = 0;
  double total_ms = 0;

  double phase_sum() const {
    return coordination_ms + production_ms + detection_ms + assign_ms + state_ms + execution_ms;
  }
};

enum class BlockStatus : std::uint8_t { kCommitted, kHalted, kValidationMismatch };

std::string_view status_name(BlockStatus s);

struct BlockOutcome {
  std::uint64_t height = 0;
  Digest block_hash{};
  Digest root{};
  BlockStatus status = BlockStatus::kHalted;
  PhaseTimings timings;
  Block block;  // as committed, root embedded
  std::vector<DroppedTx> dropped;
  std::size_t components = 0;
  NodeId leader = 0;
};

// One block of input. Either transactions the leader turns into a block
// (production) or a finished block whose embedded root is checked
// (validation).
struct BlockInput {
  std::vector<Transaction> txs;
  std::optional<Block> validate;
};

struct SimulationInput {
  StateDelta genesis;
  std::vector<BlockInput> blocks;
  coord::FaultPlan faults;
  std::uint64_t seed = 1;
  bool trace = false;
};

struct ClusterReport {
  std::vector<BlockOutcome> blocks;  // one per input block
  bool halted = false;
  std::string halt_reason;
  Digest genesis_root{};
  // Committed root and height of every node, live or not.
  std::map<NodeId, Digest> roots;
  std::map<NodeId, std::uint64_t> heights;
  std::map<NodeId, bool> up;
  bool live_roots_agree = true;
  std::vector<std::pair<NodeId, std::uint64_t>> leaders;  // (node, term) in order
  std::uint64_t reassignments = 0;
  std::uint64_t divergences = 0;
  std::uint64_t state_bytes = 0;
  coord::SimTime sim_elapsed_ms = 0;
  std::vector<std::string> events;
  std::vector<std::string> trace;
  std::vector<std::string> faults;

  bool committed_all() const;
};

// Runs a leader/follower cluster of config.cluster_size nodes (ids 1..n)
// on a simulated clock until every input block is decided or the cluster
// halts.
class ClusterSimulation {
public:
  ClusterSimulation(ClusterConfig config, SimulationInput input);
  ~ClusterSimulation();

  ClusterReport run();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ClusterReport run_cluster(const ClusterConfig& config, SimulationInput input);

}  // namespace ibex::cluster
