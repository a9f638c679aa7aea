// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "ibex/bench/baselines.hpp"
#include "ibex/bench/csv.hpp"
#include "ibex/bench/experiment.hpp"
#include "ibex/bench/merkle_bench.hpp"
#include "ibex/bench/workload.hpp"
#include "ibex/dag/graph.hpp"
#include "ibex/domain/encoding.hpp"
#include "ibex/domain/signature.hpp"
#include "ibex/sched/scheduler.hpp"
#include "oracles.hpp"

namespace ibex::bench {
namespace {

TEST(Workload, ZeroAndFullDegree) {
  for (Contract c : {Contract::kWallet, Contract::kVoting}) {
    const auto zero = generate_workload({c, 300, 0.0, 1, 0.002});
    EXPECT_EQ(dag::build_graph(zero.txs, 1).edge_count(), 0u);
    const auto full = generate_workload({c, 300, 1.0, 1, 0.002});
    EXPECT_DOUBLE_EQ(dag::dependency_degree(dag::build_graph(full.txs, 1)), 1.0);
  }
}

TEST(Workload, CalibratedAgainstPairwiseOracle) {
  for (double target : {0.01, 0.03, 0.2}) {
    const auto w = generate_workload({Contract::kWallet, 400, target, 3, 0.002});
    const auto edges = oracle::pairwise_edges(w.txs);
    const double measured = static_cast<double>(edges.size()) / (400.0 * 399.0 / 2.0);
    EXPECT_NEAR(measured, target, 0.002);
    EXPECT_EQ(w.edges, edges.size());
  }
}

TEST(Workload, FourThousandAtThreePercent) {
  const auto w = generate_workload({Contract::kVoting, 4000, 0.03, 8, 0.002});
  const double d = dag::dependency_degree(dag::build_graph(w.txs, 4));
  EXPECT_GE(d, 0.028);
  EXPECT_LE(d, 0.032);
}

TEST(Workload, DeterministicPerSeed) {
  const WorkloadSpec spec{Contract::kWallet, 500, 0.02, 77, 0.002};
  const auto a = generate_workload(spec);
  const auto b = generate_workload(spec);
  EXPECT_EQ(canonical_encode(make_block(a.txs)), canonical_encode(make_block(b.txs)));
  EXPECT_EQ(a.genesis, b.genesis);
  auto other = spec;
  other.seed = 78;
  EXPECT_NE(canonical_encode(make_block(generate_workload(other).txs)), canonical_encode(make_block(a.txs)));
}

TEST(Workload, TransactionsAreSignedAndSucceed) {
  for (Contract c : {Contract::kWallet, Contract::kVoting}) {
    const auto w = generate_workload({c, 600, 0.05, 2, 0.002});
    KeyedDigestSigner verifier;
    for (const auto& tx : w.txs) ASSERT_TRUE(verifier.verify(tx));
    MapStateView base;
    base.apply(w.genesis);
    const auto r = sched::execute_serial(make_block(w.txs), base);
    EXPECT_TRUE(r.failures.empty()) << contract_name(c) << " " << r.failures.size();
    // The genesis state is what the setup transactions produce.
    MapStateView setup;
    setup.apply(sched::execute_serial(make_block(w.setup, 0), setup).delta);
    MapStateView from_genesis;
    from_genesis.apply(w.genesis);
    EXPECT_EQ(setup.values(), from_genesis.values());
  }
}

TEST(Workload, RejectsBadTargets) {
  EXPECT_THROW(generate_workload({Contract::kWallet, 100, 1.5, 1, 0.002}), WorkloadError);
  EXPECT_THROW(generate_workload({Contract::kWallet, 100, -0.1, 1, 0.002}), WorkloadError);
  EXPECT_EQ(parse_contract(contract_name(Contract::kVoting)), Contract::kVoting);
  EXPECT_THROW(parse_contract("poker"), std::invalid_argument);
}

TEST(Baselines, EmptyBlockKeepsRoot) {
  const auto w = generate_workload({Contract::kWallet, 10, 0.0, 1, 0.002});
  const auto r = run_single_core(make_block({}), w.genesis);
  MapStateView g;
  g.apply(w.genesis);
  EXPECT_EQ(r.root, oracle::merkle_root(g.values(), 24, HashId::kSha256));
}

TEST(Baselines, ModesAgree) {
  const auto w = generate_workload({Contract::kVoting, 800, 0.03, 6, 0.002});
  const Block b = make_block(w.txs);
  const auto single = run_single_core(b, w.genesis);
  MapStateView s;
  s.apply(w.genesis);
  s.apply(sched::execute_serial(b, s).delta);
  EXPECT_EQ(single.root, oracle::merkle_root(s.values(), 24, HashId::kSha256));
  for (std::size_t p : {1u, 2u, 7u, 64u}) EXPECT_EQ(run_multi_core(b, w.genesis, p).root, single.root);
  cluster::ClusterConfig cfg;
  cfg.fabric = coord::FabricOptions::direct();
  const auto cl = run_cluster_mode(b, w.genesis, cfg);
  EXPECT_EQ(cl.status, "committed");
  EXPECT_EQ(cl.root, single.root);
  EXPECT_GT(cl.state_bytes, 0u);
  EXPECT_EQ(parse_mode(mode_name(Mode::kMulti)), Mode::kMulti);
}

TEST(Csv, QuotingAndRoundTrip) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream out;
  CsvWriter w(out);
  const std::vector<std::vector<std::string>> rows{{"h1", "h2"}, {"x,y", "line\nbreak"}, {"", "\"q\""}};
  for (const auto& r : rows) w.row(r);
  EXPECT_EQ(out.str().substr(0, 7), "h1,h2\r\n");
  EXPECT_EQ(parse_csv(out.str()), rows);
  EXPECT_EQ(fmt_ms(1.23456), "1.235");
}

TEST(Experiment, ConflictSweepCardinalityAndCsv) {
  ExperimentMatrix m;
  m.conflicts = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  m.txns = {200};
  m.modes = {Mode::kMulti};
  const auto res = run_experiment(m);
  ASSERT_TRUE(res.ok) << res.report;
  EXPECT_EQ(res.rows.size(), 6u);
  std::ostringstream out;
  write_results_csv(out, res.rows);
  const auto parsed = parse_csv(out.str());
  ASSERT_EQ(parsed.size(), 7u);
  EXPECT_EQ(parsed[0][0], "mode");
  EXPECT_EQ(parsed[0].size(), 17u);
  EXPECT_EQ(parsed[3][4], "0.02");
  std::ostringstream bd;
  write_breakdown_csv(bd, res.rows);
  EXPECT_EQ(parse_csv(bd.str()).size(), 1u + 6u * 6u);
}

TEST(Experiment, AllModesAgreeOnSmallMatrix) {
  ExperimentMatrix m;
  m.contracts = {Contract::kVoting, Contract::kWallet};
  m.conflicts = {0.0, 0.05};
  m.txns = {150};
  m.clusters = {3};
  const auto res = run_experiment(m);
  ASSERT_TRUE(res.ok) << res.report;
  ASSERT_EQ(res.rows.size(), 12u);
  for (std::size_t i = 0; i < res.rows.size(); i += 3) {
    EXPECT_EQ(res.rows[i].root, res.rows[i + 1].root);
    EXPECT_EQ(res.rows[i].root, res.rows[i + 2].root);
  }
}

TEST(Experiment, MatrixJsonAndPresets) {
  const auto m = parse_matrix_json(
      R"({"contracts":["voting"],"threads":[2,4],"conflict_pct":[1,3],"txns":[100],"clusters":[3,5],)"
      R"("crashes":[0,1],"modes":["cluster"],"seed":9,"transport":"store"})");
  EXPECT_EQ(m.contracts, std::vector<Contract>{Contract::kVoting});
  EXPECT_EQ(m.conflicts, (std::vector<double>{0.01, 0.03}));
  EXPECT_EQ(m.cell_count(), 16u);
  EXPECT_EQ(m.seed, 9u);
  EXPECT_EQ(m.base.transport, cluster::Transport::kStore);
  EXPECT_THROW(parse_matrix_json("[1,2]"), std::invalid_argument);
  EXPECT_THROW(parse_matrix_json(R"({"modes":["psychic"]})"), std::invalid_argument);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset(name));
  EXPECT_EQ(preset("crash").crashes.size(), 4u);
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Experiment, PlotDatHasOneLinePerRow) {
  ExperimentRow r;
  r.mode = Mode::kCluster;
  r.timings.total_ms = 12.5;
  std::ostringstream out;
  write_plot_dat(out, {r, r});
  std::size_t data = 0;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++data;
  EXPECT_EQ(data, 2u);
}

TEST(MerkleBench, ZipfianStaysInRangeAndSkews) {
  Zipfian z(1000, 0.99);
  Rng rng(1);
  std::vector<int> hist(1000, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto v = z.next(rng);
    ASSERT_LT(v, 1000u);
    ++hist[v];
  }
  EXPECT_GT(hist[0], hist[500] * 20);
}

TEST(MerkleBench, AllReadsLeaveRootsEqualAndUnchanged) {
  MerkleBenchSpec spec;
  spec.ops = 2000;
  spec.read_fraction = 1.0;
  spec.records = 300;
  spec.store = StoreKind::kMemory;
  const auto r = run_merkle_bench(spec, 4);
  EXPECT_TRUE(r.roots_equal());
  EXPECT_EQ(r.sequential_root, r.preload_root);
  EXPECT_EQ(r.writes, 0u);
}

TEST(MerkleBench, ReadSweepAxes) {
  MerkleBenchSpec spec;
  spec.ops = 500;
  spec.records = 100;
  spec.store = StoreKind::kMemory;
  const auto rows = merkle_read_sweep(spec, 2);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i].read_pct, 20.0 * static_cast<double>(i));
    EXPECT_TRUE(rows[i].result.roots_equal());
  }
}

TEST(MerkleBench, FileStoreWriteHeavyRootsEqual) {
  MerkleBenchSpec spec;
  spec.ops = 3000;
  spec.records = 1000;
  const auto r = run_merkle_bench(spec, 4);
  EXPECT_TRUE(r.roots_equal());
  EXPECT_EQ(r.writes, 3000u);
  EXPECT_LE(r.distinct_written, 1000u);
}

}  // namespace
}  // namespace ibex::bench
