// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ibex/merkle/layout.hpp"
#include "ibex/merkle/staging_map.hpp"
#include "ibex/merkle/store.hpp"

namespace ibex::merkle {

// Invoked at instrumented points of a commit: "phase2", "phase3" and
// "phase3-mid". Throwing from the hook abandons the commit.
using CommitHook = std::function<void(std::string_view point)>;

struct CommitStats {
  std::size_t staged_keys = 0;
  std::size_t buckets = 0;
  std::size_t internal_nodes = 0;
  std::size_t workers = 0;
  // Populated only when tracing is enabled on the tree.
  std::vector<NodePath> recomputed;
  std::vector<std::size_t> bucket_owner;
};

// Output of Phases 2 and 3 that has not been published yet.
struct PreparedCommit {
  WriteBatch batch;
  Digest root{};
  CommitStats stats;
};

// Working set of node writes layered over the committed store. Used for
// single-key leaf writes and path recomputation outside the batched commit.
class TreeUpdate {
public:
  TreeUpdate(const Layout& layout, const NodeStore& store) : layout_(&layout), store_(&store) {}

  // Rewrites key's leaf bucket. Ancestors are left stale.
  void write_leaf(const Address& key, Value value);
  // Recomputes all ancestors on key's path from the current working set.
  void update_parent_hashes(const Address& key);

  Digest root() const;
  std::size_t internal_recomputes() const { return internal_recomputes_; }
  PreparedCommit finish() &&;

private:
  std::optional<Bytes> read(NodePath p) const;

  const Layout* layout_;
  const NodeStore* store_;
  std::unordered_map<std::uint64_t, Bytes> overlay_;
  std::optional<Digest> root_;
  std::size_t internal_recomputes_ = 0;
};

// Three-phase tree: writes are staged concurrently (Phase 1), staged buckets
// are rewritten in parallel (Phase 2), then affected internal nodes are
// recomputed bottom-up once each (Phase 3). Only the root produced after
// Phase 3 is ever published.
class ConcurrentMerkleTree {
public:
  ConcurrentMerkleTree(NodeStore& store, TreeConfig config = {});

  const Layout& layout() const { return layout_; }
  NodeStore& store() { return *store_; }

  // Phase 1. Safe for any number of concurrent callers.
  void update_value(const Address& key, Value value) { staging_.put(key, std::move(value)); }
  std::optional<Value> get_staged(const Address& key) const { return staging_.get(key); }
  StagingMap& staging() { return staging_; }
  const StagingMap& staging() const { return staging_; }

  // Committed state only.
  std::optional<Value> get_value(const Address& key) const;
  Digest get_root_hash() const;

  // Phases 2 and 3 without publishing. Staging must not change meanwhile.
  PreparedCommit prepare(std::size_t parallelism);
  // Publishes a prepared commit and clears staging. On store failure the
  // previous root stays committed and staging is kept.
  Digest commit(PreparedCommit&& prepared);
  void discard_staging() { staging_.clear(); }

  Digest parallel_insert_from_map(std::size_t parallelism) { return commit(prepare(parallelism)); }

  TreeUpdate begin_update() const { return TreeUpdate(layout_, *store_); }

  void set_commit_hook(CommitHook hook) { hook_ = std::move(hook); }
  void set_tracing(bool on) { tracing_ = on; }
  const CommitStats& last_stats() const { return last_stats_; }

private:
  void fire(std::string_view point) const {
    if (hook_) hook_(point);
  }

  Layout layout_;
  NodeStore* store_;
  StagingMap staging_;
  CommitHook hook_;
  bool tracing_ = false;
  CommitStats last_stats_;
};

}  // namespace ibex::merkle

namespace ibex::merkle {

// Reads staged writes first, then the committed tree.
class ReadThroughView : public StateView {
public:
  explicit ReadThroughView(const ConcurrentMerkleTree& tree) : tree_(&tree) {}
  std::optional<Value> get(const Address& key) const override {
    if (auto v = tree_->get_staged(key)) return v;
    return tree_->get_value(key);
  }

private:
  const ConcurrentMerkleTree* tree_;
};

}  // namespace ibex::merkle
