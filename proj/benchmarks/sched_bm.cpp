// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "ibex/bench/workload.hpp"
#include "ibex/dag/components.hpp"
#include "ibex/sched/scheduler.hpp"

namespace {

using namespace ibex;

void BM_ExecuteComponents(benchmark::State& state) {
  const auto w = bench::generate_workload(
      {Contract::kWallet, static_cast<std::size_t>(state.range(0)), state.range(1) / 100.0, 3, 0.002});
  const Block block = bench::make_block(w.txs);
  const auto g = dag::build_graph(block.txs, 1);
  const auto comps = dag::connected_components(g);
  const auto all = sched::all_components(comps);
  MapStateView base;
  base.apply(w.genesis);
  const auto lanes = static_cast<std::size_t>(state.range(2));
  for (auto _ : state) {
    auto r = sched::execute_components(block, g, comps, all, base, lanes);
    benchmark::DoNotOptimize(r.delta.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * block.txs.size()));
}
BENCHMARK(BM_ExecuteComponents)
    ->Args({1000, 0, 1})
    ->Args({1000, 0, 4})
    ->Args({1000, 50, 4})
    ->Unit(benchmark::kMillisecond);

void BM_ExecuteSerial(benchmark::State& state) {
  const auto w = bench::generate_workload({Contract::kWallet, static_cast<std::size_t>(state.range(0)), 0.0, 3, 0.002});
  const Block block = bench::make_block(w.txs);
  MapStateView base;
  base.apply(w.genesis);
  for (auto _ : state) {
    auto r = sched::execute_serial(block, base);
    benchmark::DoNotOptimize(r.delta.size());
  }
}
BENCHMARK(BM_ExecuteSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
