// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "ibex/bench/merkle_bench.hpp"
#include "ibex/merkle/concurrent_tree.hpp"
#include "ibex/merkle/sequential_tree.hpp"
#include "oracles.hpp"

namespace ibex::merkle {
namespace {

namespace fs = std::filesystem;

Address key(std::uint64_t i) { return Address("k" + std::to_string(i)); }
Value val(std::uint64_t v) { return encode_u64_value(v); }

class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("ibex_merkle_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

TEST(Layout, BucketRoundTripAndUpsert) {
  LeafBucket b;
  Digest k1{}, k2{};
  k1[0] = 2;
  k2[0] = 1;
  upsert(b, k1, Bytes{1});
  upsert(b, k2, Bytes{2});
  upsert(b, k1, Bytes{3});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].key_hash, k2);
  EXPECT_EQ(*lookup(b, k1), Bytes{3});
  EXPECT_EQ(decode_bucket(encode_bucket(b)), b);
  EXPECT_EQ(encode_bucket({}), (Bytes{0, 0, 0, 0, 0}));
  const auto [l, r] = decode_internal(encode_internal(k1, k2));
  EXPECT_EQ(l, k1);
  EXPECT_EQ(r, k2);
  EXPECT_THROW(TreeConfig{0}.validate(), std::invalid_argument);
  EXPECT_THROW(TreeConfig{33}.validate(), std::invalid_argument);
}

TEST(ConcurrentTree, EmptyRootIsPinnedDefault) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  const Digest root = tree.get_root_hash();
  EXPECT_EQ(root, oracle::merkle_root({}, 24, HashId::kSha256));
  EXPECT_EQ(to_hex(root), "71a74998ce84376520b330049bd80d714ba4bbf78cc318284222a838bec418e7");
}

TEST(ConcurrentTree, StagingIsolation) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  const Digest before = tree.get_root_hash();
  tree.update_value(key(1), val(1));
  EXPECT_EQ(tree.get_staged(key(1)), val(1));
  EXPECT_FALSE(tree.get_value(key(1)).has_value());
  EXPECT_EQ(tree.get_root_hash(), before);
}

TEST(ConcurrentTree, DisjointWorkersAndLastWriteWins) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  std::thread a([&] {
    for (int i = 0; i < 500; ++i) tree.update_value(key(i), val(i));
  });
  std::thread b([&] {
    for (int i = 500; i < 1000; ++i) tree.update_value(key(i), val(i));
  });
  a.join();
  b.join();
  EXPECT_EQ(tree.staging().size(), 1000u);
  tree.update_value(key(3), val(30));
  tree.update_value(key(3), val(31));
  tree.parallel_insert_from_map(4);
  EXPECT_EQ(tree.get_value(key(3)), val(31));
  EXPECT_EQ(tree.get_value(key(999)), val(999));
}

TEST(ConcurrentTree, FreshTreeAndSingleCommit) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  EXPECT_FALSE(tree.get_value(Address("a")).has_value());
  tree.update_value(Address("a"), val(7));
  const Digest r1 = tree.parallel_insert_from_map(1);
  EXPECT_EQ(tree.get_value(Address("a")), val(7));
  EXPECT_TRUE(tree.staging().empty());
  tree.update_value(Address("a"), val(8));
  EXPECT_NE(tree.parallel_insert_from_map(1), r1);
}

TEST(ConcurrentTree, EmptyStagingLeavesRoot) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  tree.update_value(key(1), val(1));
  const Digest r = tree.parallel_insert_from_map(2);
  EXPECT_EQ(tree.parallel_insert_from_map(2), r);
}

TEST(ConcurrentTree, ParallelismDoesNotChangeRoot) {
  MemoryStore s1, s8;
  ConcurrentMerkleTree t1(s1), t8(s8);
  for (auto* t : {&t1, &t8}) {
    t->update_value(Address("a"), val(1));
    t->update_value(Address("b"), val(2));
  }
  EXPECT_EQ(t1.parallel_insert_from_map(1), t8.parallel_insert_from_map(8));
}

TEST(ConcurrentTree, RandomCommitsMatchMapOracle) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store, TreeConfig{16, HashId::kSha256});
  std::map<Address, Value> model;
  Rng rng(17);
  for (int c = 0; c < 10'000; ++c) {
    const std::size_t writes = 1 + rng.below(3);
    for (std::size_t w = 0; w < writes; ++w) {
      const Address k = key(rng.below(2000));
      const Value v = val(rng.next());
      tree.update_value(k, v);
      model[k] = v;
    }
    tree.parallel_insert_from_map(1 + rng.below(4));
    const Address probe = key(rng.below(2000));
    const auto it = model.find(probe);
    ASSERT_EQ(tree.get_value(probe), it == model.end() ? std::nullopt : std::optional<Value>(it->second));
  }
  for (const auto& [k, v] : model) ASSERT_EQ(tree.get_value(k), v);
  EXPECT_EQ(tree.get_root_hash(), oracle::merkle_root(model, 16, HashId::kSha256));
}

TEST(ConcurrentTree, HundredThousandKeysMatchSequentialOracle) {
  MemoryStore cs, ss;
  ConcurrentMerkleTree tree(cs);
  SequentialMerkleTree seq(ss);
  std::map<Address, Value> model;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    tree.update_value(key(i), val(i * 3));
    model[key(i)] = val(i * 3);
  }
  const Digest root = tree.parallel_insert_from_map(8);
  for (const auto& [k, v] : model) seq.oracle_insert(k, v);
  EXPECT_EQ(root, seq.get_root_hash());
  EXPECT_EQ(root, oracle::merkle_root(model, 24, HashId::kSha256));
}

TEST(ConcurrentTree, StoreFailureKeepsPreviousRootAndStaging) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  tree.update_value(key(1), val(1));
  const Digest r1 = tree.parallel_insert_from_map(2);
  tree.update_value(key(2), val(2));
  store.fail_next_applies(1);
  EXPECT_THROW(tree.parallel_insert_from_map(2), StoreError);
  EXPECT_EQ(tree.get_root_hash(), r1);
  EXPECT_EQ(tree.get_staged(key(2)), val(2));
  EXPECT_FALSE(tree.get_value(key(2)).has_value());
  const Digest r2 = tree.parallel_insert_from_map(2);
  EXPECT_EQ(r2, oracle::merkle_root({{key(1), val(1)}, {key(2), val(2)}}, 24, HashId::kSha256));
}

TEST(ConcurrentTree, HookAbortAbandonsCommit) {
  for (const char* point : {"phase2", "phase3-mid", "phase3"}) {
    MemoryStore store;
    ConcurrentMerkleTree tree(store);
    const Digest before = tree.get_root_hash();
    for (int i = 0; i < 100; ++i) tree.update_value(key(i), val(i));
    std::vector<std::string> seen;
    tree.set_commit_hook([&](std::string_view p) {
      seen.emplace_back(p);
      if (p == point) throw std::runtime_error("crash");
    });
    EXPECT_THROW(tree.parallel_insert_from_map(4), std::runtime_error);
    EXPECT_EQ(tree.get_root_hash(), before) << point;
    EXPECT_EQ(store.apply_count(), 0u);
    EXPECT_EQ(seen.back(), point);
  }
}

TEST(ConcurrentTree, TracingRecomputesEachInternalNodeOnce) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store, TreeConfig{10, HashId::kSha256});
  tree.set_tracing(true);
  for (int i = 0; i < 300; ++i) tree.update_value(key(i), val(i));
  tree.parallel_insert_from_map(4);
  const auto& st = tree.last_stats();
  std::set<NodePath> unique(st.recomputed.begin(), st.recomputed.end());
  EXPECT_EQ(unique.size(), st.recomputed.size());
  EXPECT_EQ(st.internal_nodes, st.recomputed.size());
  EXPECT_EQ(st.staged_keys, 300u);
}

TEST(TreeUpdate, LeafWriteThenPathMatchesOracle) {
  MemoryStore store;
  ConcurrentMerkleTree tree(store);
  tree.update_value(Address("x"), val(1));
  tree.parallel_insert_from_map(1);
  auto up = tree.begin_update();
  up.write_leaf(Address("a"), val(5));
  up.update_parent_hashes(Address("a"));
  const Digest once = up.root();
  EXPECT_EQ(once, oracle::merkle_root({{Address("x"), val(1)}, {Address("a"), val(5)}}, 24, HashId::kSha256));
  up.update_parent_hashes(Address("a"));
  EXPECT_EQ(up.root(), once);
}

TEST(TreeUpdate, SharedBucketNeedsOnePathRecompute) {
  MemoryStore store;
  // Depth 1: at most two buckets, so among three keys two share one.
  ConcurrentMerkleTree tree(store, TreeConfig{1, HashId::kSha256});
  const Layout& layout = tree.layout();
  std::vector<Address> keys;
  for (int i = 0; keys.size() < 2; ++i) {
    const Address k = key(i);
    if (layout.bucket_of(layout.key_hash(k)) == 0) keys.push_back(k);
  }
  auto up = tree.begin_update();
  up.write_leaf(keys[0], val(1));
  up.write_leaf(keys[1], val(2));
  up.update_parent_hashes(keys[0]);
  EXPECT_EQ(up.internal_recomputes(), 1u);
  EXPECT_EQ(up.root(), oracle::merkle_root({{keys[0], val(1)}, {keys[1], val(2)}}, 1, HashId::kSha256));
}

TEST(SequentialTree, InsertGetAndOrderIndependence) {
  MemoryStore s1, s2;
  SequentialMerkleTree a(s1), b(s2);
  a.oracle_insert(Address("a"), val(1));
  EXPECT_EQ(a.get_value(Address("a")), val(1));
  a.oracle_insert(Address("b"), val(2));
  b.oracle_insert(Address("b"), val(2));
  b.oracle_insert(Address("a"), val(1));
  EXPECT_EQ(a.get_root_hash(), b.get_root_hash());
}

TEST(SequentialTree, YcsbTraceMatchesConcurrentTree) {
  bench::MerkleBenchSpec spec;
  spec.ops = 5000;
  spec.read_fraction = 0.5;
  spec.records = 500;
  spec.store = bench::StoreKind::kMemory;
  const auto trace = bench::make_trace(spec);
  MemoryStore s1, s2;
  SequentialMerkleTree seq(s1);
  ConcurrentMerkleTree con(s2);
  std::map<Address, Value> model;
  for (const auto& op : trace) {
    if (op.read) {
      const auto it = model.find(op.key);
      ASSERT_EQ(seq.get_value(op.key), it == model.end() ? std::nullopt : std::optional<Value>(it->second));
      continue;
    }
    seq.oracle_insert(op.key, op.value);
    con.update_value(op.key, op.value);
    model[op.key] = op.value;
  }
  EXPECT_EQ(con.parallel_insert_from_map(4), seq.get_root_hash());
}

TEST(FileStore, PersistsAcrossReopen) {
  TempDir dir;
  Digest root;
  {
    FileStore store(dir.path());
    ConcurrentMerkleTree tree(store);
    for (int i = 0; i < 200; ++i) tree.update_value(key(i), val(i));
    root = tree.parallel_insert_from_map(2);
  }
  FileStore store(dir.path());
  ConcurrentMerkleTree tree(store);
  EXPECT_EQ(tree.get_root_hash(), root);
  EXPECT_EQ(tree.get_value(key(42)), val(42));
}

TEST(FileStore, TornAppendIsTruncatedOnReopen) {
  TempDir dir;
  Digest root;
  std::uint64_t committed = 0;
  {
    FileStore store(dir.path());
    ConcurrentMerkleTree tree(store);
    tree.update_value(key(1), val(1));
    root = tree.parallel_insert_from_map(1);
    committed = store.segment_bytes();
  }
  {
    std::ofstream seg(dir.path() / "nodes.seg", std::ios::binary | std::ios::app);
    seg << "partial garbage from an unfinished apply";
  }
  FileStore store(dir.path());
  EXPECT_EQ(store.root(), root);
  EXPECT_EQ(store.segment_bytes(), committed);
  EXPECT_EQ(fs::file_size(dir.path() / "nodes.seg"), committed);
  ConcurrentMerkleTree tree(store);
  tree.update_value(key(2), val(2));
  EXPECT_EQ(tree.parallel_insert_from_map(1),
            oracle::merkle_root({{key(1), val(1)}, {key(2), val(2)}}, 24, HashId::kSha256));
}

TEST(FileStore, RejectsCorruptRootRegister) {
  TempDir dir;
  {
    FileStore store(dir.path());
    ConcurrentMerkleTree tree(store);
    tree.update_value(key(1), val(1));
    tree.parallel_insert_from_map(1);
  }
  {
    std::ofstream reg(dir.path() / "root.reg", std::ios::binary | std::ios::trunc);
    reg << "JUNK";
  }
  EXPECT_THROW(FileStore{dir.path()}, StoreError);
}

}  // namespace
}  // namespace ibex::merkle
