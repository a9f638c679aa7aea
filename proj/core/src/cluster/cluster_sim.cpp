// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/cluster_sim.hpp"

#include <algorithm>

#include "ibex/cluster/node.hpp"
#include "ibex/merkle/concurrent_tree.hpp"

namespace ibex::cluster {

std::string_view status_name(BlockStatus s) {
  switch (s) {
    case BlockStatus::kCommitted: return "committed";
    case BlockStatus::kHalted: return "halted";
    case BlockStatus::kValidationMismatch: return "validation-mismatch";
  }
  return "unknown";
}

bool ClusterReport::committed_all() const {
  return !blocks.empty() && std::all_of(blocks.begin(), blocks.end(), [](const BlockOutcome& b) {
    return b.status == BlockStatus::kCommitted;
  });
}

struct ClusterSimulation::Impl {
  Impl(ClusterConfig config, SimulationInput in)
      : input(std::move(in)), ctx(std::move(config), input.seed, input.trace) {}

  SimulationInput input;
  SimContext ctx;
  Digest genesis_root{};
  bool ran = false;
};

ClusterSimulation::ClusterSimulation(ClusterConfig config, SimulationInput input) {
  config.validate();
  impl_ = std::make_unique<Impl>(std::move(config), std::move(input));
  SimContext& ctx = impl_->ctx;
  for (NodeId id = 1; id <= ctx.config.cluster_size; ++id) ctx.members.push_back(id);
  ctx.inputs = impl_->input.blocks;
  for (const auto& in : ctx.inputs) {
    if (!in.validate) ctx.pool.push_all(in.txs);
  }
  for (NodeId id : ctx.members) {
    ctx.nodes.emplace(id, std::make_unique<Node>(ctx, id, impl_->input.genesis));
  }
  impl_->genesis_root = ctx.nodes.begin()->second->root();

  coord::FaultInjector::Hooks hooks;
  hooks.crash = [&ctx](NodeId id) { ctx.crash(id); };
  hooks.restart = [&ctx](NodeId id) { ctx.restart(id); };
  hooks.leader = [&ctx]() -> std::optional<NodeId> {
    for (const auto& [id, n] : ctx.nodes) {
      if (n->up() && n->role() == coord::Role::kLeader) return id;
    }
    return std::nullopt;
  };
  hooks.live_followers = [&ctx] {
    std::vector<NodeId> out;
    for (const auto& [id, n] : ctx.nodes) {
      if (n->up() && n->role() != coord::Role::kLeader) out.push_back(id);
    }
    return out;
  };
  try {
    ctx.injector = std::make_unique<coord::FaultInjector>(ctx.loop, impl_->input.faults, ctx.members, std::move(hooks));
  } catch (const coord::FaultPlanError& e) {
    throw ConfigError(e.what());
  }
}

ClusterSimulation::~ClusterSimulation() = default;

ClusterReport ClusterSimulation::run() {
  if (impl_->ran) throw std::logic_error("a cluster simulation runs once");
  impl_->ran = true;
  SimContext& ctx = impl_->ctx;
  for (auto& [id, n] : ctx.nodes) n->start();
  ctx.injector->arm();

  const auto blocks = static_cast<coord::SimTime>(std::max<std::size_t>(ctx.inputs.size(), 1));
  const coord::SimTime deadline = ctx.loop.now() + ctx.config.block_budget_ms * blocks;
  const bool decided = ctx.loop.run_until([&] { return ctx.finished || ctx.halted; }, deadline);
  // Let in-flight commit messages land.
  ctx.loop.run_until(ctx.loop.now() + ctx.config.fabric.max_delay_ms + 1);

  ClusterReport r;
  r.genesis_root = impl_->genesis_root;
  r.halted = ctx.halted || !decided;
  r.halt_reason = ctx.halted ? ctx.halt_reason : (decided ? "" : "stalled: no leader with quorum");
  for (std::uint64_t h = 1; h <= ctx.inputs.size(); ++h) {
    if (auto it = ctx.outcomes.find(h); it != ctx.outcomes.end()) {
      r.blocks.push_back(it->second);
    } else {
      BlockOutcome out;
      out.height = h;
      out.status = BlockStatus::kHalted;
      r.blocks.push_back(std::move(out));
    }
  }
  std::optional<std::pair<Digest, std::uint64_t>> first;
  for (const auto& [id, n] : ctx.nodes) {
    r.roots[id] = n->root();
    r.heights[id] = n->height();
    r.up[id] = n->up();
    if (!n->up()) continue;
    const auto mine = std::make_pair(n->root(), n->height());
    if (!first) {
      first = mine;
    } else if (*first != mine) {
      r.live_roots_agree = false;
    }
  }
  r.leaders = ctx.leaders;
  r.reassignments = ctx.reassignments;
  r.divergences = ctx.divergences;
  r.state_bytes = ctx.state_bytes;
  r.sim_elapsed_ms = ctx.loop.now();
  r.events = ctx.events;
  r.trace = ctx.fabric.trace();
  r.faults = ctx.injector->log();
  return r;
}

ClusterReport run_cluster(const ClusterConfig& config, SimulationInput input) {
  ClusterSimulation sim(config, std::move(input));
  return sim.run();
}

}  // namespace ibex::cluster
