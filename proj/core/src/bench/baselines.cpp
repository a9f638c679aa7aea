// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/bench/baselines.hpp"

#include <chrono>
#include <stdexcept>

#include "ibex/dag/components.hpp"
#include "ibex/dag/graph.hpp"
#include "ibex/domain/contracts.hpp"
#include "ibex/merkle/concurrent_tree.hpp"
#include "ibex/merkle/sequential_tree.hpp"
#include "ibex/merkle/store.hpp"
#include "ibex/sched/scheduler.hpp"

namespace ibex::bench {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kSingle: return "single";
    case Mode::kMulti: return "multi";
    case Mode::kCluster: return "cluster";
  }
  return "unknown";
}

Mode parse_mode(std::string_view s) {
  if (s == "single") return Mode::kSingle;
  if (s == "multi") return Mode::kMulti;
  if (s == "cluster") return Mode::kCluster;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class SequentialView : public StateView {
public:
  explicit SequentialView(const merkle::SequentialMerkleTree& t) : tree_(&t) {}
  std::optional<Value> get(const Address& key) const override { return tree_->get_value(key); }

private:
  const merkle::SequentialMerkleTree* tree_;
};

void preload(merkle::NodeStore& store, const StateDelta& genesis, const merkle::TreeConfig& cfg) {
  if (genesis.empty()) return;
  merkle::ConcurrentMerkleTree t(store, cfg);
  t.staging().stage(genesis);
  t.parallel_insert_from_map(4);
}

}  // namespace

RunResult run_single_core(const Block& block, const StateDelta& genesis, const merkle::TreeConfig& cfg) {
  merkle::MemoryStore store;
  preload(store, genesis, cfg);
  merkle::SequentialMerkleTree tree(store, cfg);
  RunResult r;
  r.mode = Mode::kSingle;
  const auto t0 = Clock::now();
  SequentialView view(tree);
  double exec = 0;
  double state = 0;
  for (const auto& tx : block.txs) {
    const auto e0 = Clock::now();
    auto res = execute(tx.call, view);
    exec += ms_since(e0);
    if (auto* d = std::get_if<StateDelta>(&res)) {
      const auto s0 = Clock::now();
      for (const auto& [k, v] : d->writes()) tree.oracle_insert(k, v);
      state += ms_since(s0);
    } else {
      ++r.failures;
    }
  }
  r.root = tree.get_root_hash();
  r.timings.execution_ms = exec;
  r.timings.state_ms = state;
  r.timings.total_ms = ms_since(t0);
  return r;
}

RunResult run_multi_core(const Block& block, const StateDelta& genesis, std::size_t parallelism,
                         const merkle::TreeConfig& cfg) {
  merkle::MemoryStore store;
  preload(store, genesis, cfg);
  merkle::ConcurrentMerkleTree tree(store, cfg);
  RunResult r;
  r.mode = Mode::kMulti;
  const auto t0 = Clock::now();

  auto p0 = Clock::now();
  const auto graph = dag::build_graph(block.txs, parallelism);
  const auto comps = dag::connected_components(graph);
  r.timings.detection_ms = ms_since(p0);
  r.components = comps.count();

  p0 = Clock::now();
  merkle::ReadThroughView view(tree);
  auto report = sched::execute_components(block, graph, comps, sched::all_components(comps), view, parallelism);
  r.timings.execution_ms = ms_since(p0);
  r.failures = report.failures.size();
  r.dispatch_order = std::move(report.dispatch_order);

  p0 = Clock::now();
  tree.staging().stage(report.delta);
  r.root = tree.parallel_insert_from_map(parallelism);
  r.timings.state_ms = ms_since(p0);
  r.timings.total_ms = ms_since(t0);
  return r;
}

RunResult run_cluster_mode(const Block& block, const StateDelta& genesis, const cluster::ClusterConfig& config,
                           const coord::FaultPlan& faults, std::uint64_t seed) {
  cluster::SimulationInput in;
  in.genesis = genesis;
  in.blocks.push_back(cluster::BlockInput{block.txs, std::nullopt});
  in.faults = faults;
  in.seed = seed;
  RunResult r;
  r.mode = Mode::kCluster;
  r.report = cluster::run_cluster(config, std::move(in));
  const auto& out = r.report.blocks.front();
  r.timings = out.timings;
  r.root = out.status == cluster::BlockStatus::kCommitted ? out.root : r.report.genesis_root;
  r.status = std::string(cluster::status_name(out.status));
  r.state_bytes = r.report.state_bytes;
  r.components = out.components;
  if (r.report.divergences != 0 || !r.report.live_roots_agree) r.status = "diverged";
  return r;
}

}  // namespace ibex::bench
