// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "ibex/bench/merkle_bench.hpp"
#include "ibex/merkle/concurrent_tree.hpp"
#include "ibex/merkle/sequential_tree.hpp"

namespace {

using namespace ibex;

std::vector<bench::KvOp> write_trace(std::size_t ops) {
  bench::MerkleBenchSpec spec;
  spec.ops = ops;
  spec.store = bench::StoreKind::kMemory;
  return bench::make_trace(spec);
}

void BM_SequentialInsert(benchmark::State& state) {
  const auto trace = write_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    merkle::MemoryStore store;
    merkle::SequentialMerkleTree tree(store);
    for (const auto& op : trace) tree.oracle_insert(op.key, op.value);
    benchmark::DoNotOptimize(tree.get_root_hash());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trace.size()));
}
BENCHMARK(BM_SequentialInsert)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ThreePhaseCommit(benchmark::State& state) {
  const auto trace = write_trace(static_cast<std::size_t>(state.range(0)));
  const auto workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    merkle::MemoryStore store;
    merkle::ConcurrentMerkleTree tree(store);
    for (const auto& op : trace) tree.update_value(op.key, op.value);
    benchmark::DoNotOptimize(tree.parallel_insert_from_map(workers));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trace.size()));
}
BENCHMARK(BM_ThreePhaseCommit)->Args({1000, 1})->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

void BM_FileStoreRun(benchmark::State& state) {
  bench::MerkleBenchSpec spec;
  spec.ops = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto r = bench::run_merkle_bench(spec, 4);
    state.counters["speedup"] = r.speedup();
  }
}
BENCHMARK(BM_FileStoreRun)->Arg(5000)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
