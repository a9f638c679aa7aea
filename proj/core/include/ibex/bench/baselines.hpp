// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ibex/cluster/cluster_sim.hpp"
#include "ibex/coord/fault_plan.hpp"
#include "ibex/domain/types.hpp"
#include "ibex/merkle/layout.hpp"

namespace ibex::bench {

enum class Mode : std::uint8_t { kSingle, kMulti, kCluster };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view s);

using cluster::PhaseTimings;

struct RunResult {
  Mode mode = Mode::kSingle;
  PhaseTimings timings;
  Digest root{};
  std::string status = "committed";
  std::size_t failures = 0;
  std::uint64_t state_bytes = 0;
  std::size_t components = 0;
  std::vector<TxId> dispatch_order;  // multi-core only
  cluster::ClusterReport report;     // cluster only

  bool committed() const { return status == "committed"; }
};

// Ascending tx id on one core against the sequential tree, each write
// applied to the tree immediately.
RunResult run_single_core(const Block& block, const StateDelta& genesis, const merkle::TreeConfig& tree = {});

// DAG, scheduler and concurrent tree on one node, no coordination.
RunResult run_multi_core(const Block& block, const StateDelta& genesis, std::size_t parallelism,
                         const merkle::TreeConfig& tree = {});

// The block's transactions go through a simulated cluster.
RunResult run_cluster_mode(const Block& block, const StateDelta& genesis, const cluster::ClusterConfig& config,
                           const coord::FaultPlan& faults = {}, std::uint64_t seed = 1);

}  // namespace ibex::bench
