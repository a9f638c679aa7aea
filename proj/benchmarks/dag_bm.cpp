// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "ibex/bench/workload.hpp"
#include "ibex/dag/components.hpp"
#include "ibex/dag/graph.hpp"

namespace {

using namespace ibex;

std::vector<Transaction> block_txs(std::size_t n, double degree) {
  return bench::generate_workload({Contract::kWallet, n, degree, 7, 0.002}).txs;
}

void BM_BuildGraph(benchmark::State& state) {
  const auto txs = block_txs(static_cast<std::size_t>(state.range(0)), state.range(1) / 100.0);
  const auto threads = static_cast<std::size_t>(state.range(2));
  for (auto _ : state) {
    auto g = dag::build_graph(txs, threads);
    benchmark::DoNotOptimize(g.edge_count());
  }
}
BENCHMARK(BM_BuildGraph)
    ->Args({1000, 0, 1})
    ->Args({1000, 50, 1})
    ->Args({4000, 10, 1})
    ->Args({4000, 10, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Components(benchmark::State& state) {
  const auto txs = block_txs(static_cast<std::size_t>(state.range(0)), state.range(1) / 100.0);
  const auto g = dag::build_graph(txs, 1);
  for (auto _ : state) {
    auto c = dag::connected_components(g);
    benchmark::DoNotOptimize(c.count());
  }
}
BENCHMARK(BM_Components)->Args({1000, 0})->Args({1000, 50})->Args({4000, 10})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
