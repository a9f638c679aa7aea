// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/merkle/concurrent_tree.hpp"

#include <algorithm>

#include "ibex/common/parallel.hpp"

namespace ibex::merkle {

namespace {

struct StagedItem {
  Digest key_hash;
  std::uint32_t bucket = 0;
  const Value* value = nullptr;
};

struct NodeHash {
  std::uint32_t index;
  Digest hash;
};

}  // namespace

void TreeUpdate::write_leaf(const Address& key, Value value) {
  const Digest kh = layout_->key_hash(key);
  const NodePath path{static_cast<std::uint8_t>(layout_->depth()), layout_->bucket_of(kh)};
  const auto existing = read(path);
  LeafBucket bucket = existing ? decode_bucket(*existing) : LeafBucket{};
  upsert(bucket, kh, std::move(value));
  overlay_[path.key()] = encode_bucket(bucket);
}

void TreeUpdate::update_parent_hashes(const Address& key) {
  const std::uint32_t depth = layout_->depth();
  std::uint32_t index = layout_->bucket_of(layout_->key_hash(key));
  const auto leaf = read({static_cast<std::uint8_t>(depth), index});
  Digest child = leaf ? layout_->node_hash(*leaf) : layout_->default_hash(depth);
  for (std::uint32_t level = depth; level-- > 0;) {
    const bool right = index & 1;
    index >>= 1;
    const NodePath path{static_cast<std::uint8_t>(level), index};
    auto [l, r] = layout_->children_of(level, read(path));
    (right ? r : l) = child;
    Bytes rec = encode_internal(l, r);
    child = layout_->node_hash(rec);
    overlay_[path.key()] = std::move(rec);
    ++internal_recomputes_;
  }
  root_ = child;
}

std::optional<Bytes> TreeUpdate::read(NodePath p) const {
  if (const auto it = overlay_.find(p.key()); it != overlay_.end()) return it->second;
  return store_->get(p);
}

Digest TreeUpdate::root() const {
  if (root_) return *root_;
  const auto rec = read({0, 0});
  return rec ? layout_->node_hash(*rec) : layout_->empty_root();
}

PreparedCommit TreeUpdate::finish() && {
  PreparedCommit out;
  out.root = root();
  std::vector<std::uint64_t> keys;
  keys.reserve(overlay_.size());
  for (const auto& [k, v] : overlay_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t k : keys) out.batch.emplace_back(NodePath::from_key(k), std::move(overlay_[k]));
  out.stats.internal_nodes = internal_recomputes_;
  return out;
}

ConcurrentMerkleTree::ConcurrentMerkleTree(NodeStore& store, TreeConfig config)
    : layout_(config), store_(&store) {}

std::optional<Value> ConcurrentMerkleTree::get_value(const Address& key) const {
  const Digest kh = layout_.key_hash(key);
  const auto rec = store_->get({static_cast<std::uint8_t>(layout_.depth()), layout_.bucket_of(kh)});
  if (!rec) return std::nullopt;
  const LeafBucket bucket = decode_bucket(*rec);
  const Value* v = lookup(bucket, kh);
  if (!v) return std::nullopt;
  return *v;
}

Digest ConcurrentMerkleTree::get_root_hash() const { return store_->root().value_or(layout_.empty_root()); }

PreparedCommit ConcurrentMerkleTree::prepare(std::size_t parallelism) {
  parallelism = std::max<std::size_t>(1, parallelism);
  PreparedCommit out;
  const auto items = staging_.snapshot();
  out.stats.staged_keys = items.size();
  out.stats.workers = parallelism;
  if (items.empty()) {
    out.root = get_root_hash();
    return out;
  }
  const std::uint32_t depth = layout_.depth();

  // Phase 2: hash keys in balanced chunks, group by bucket, then give each
  // worker a contiguous run of buckets so every bucket has a single writer.
  fire("phase2");
  std::vector<StagedItem> staged(items.size());
  run_chunked(items.size(), parallelism, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      staged[i].key_hash = layout_.key_hash(items[i].first);
      staged[i].bucket = layout_.bucket_of(staged[i].key_hash);
      staged[i].value = &items[i].second;
    }
  });
  std::sort(staged.begin(), staged.end(), [](const StagedItem& a, const StagedItem& b) {
    return a.bucket != b.bucket ? a.bucket < b.bucket : a.key_hash < b.key_hash;
  });
  std::vector<std::size_t> bucket_start;
  for (std::size_t i = 0; i < staged.size(); ++i) {
    if (i == 0 || staged[i].bucket != staged[i - 1].bucket) bucket_start.push_back(i);
  }
  const std::size_t buckets = bucket_start.size();
  bucket_start.push_back(staged.size());
  out.stats.buckets = buckets;
  if (tracing_) out.stats.bucket_owner.assign(buckets, 0);

  std::vector<Bytes> leaf_bytes(buckets);
  std::vector<NodeHash> level_hashes(buckets);
  run_chunked(buckets, parallelism, [&](std::size_t worker, std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const std::uint32_t index = staged[bucket_start[b]].bucket;
      const auto existing = store_->get({static_cast<std::uint8_t>(depth), index});
      LeafBucket bucket = existing ? decode_bucket(*existing) : LeafBucket{};
      for (std::size_t i = bucket_start[b]; i < bucket_start[b + 1]; ++i) {
        upsert(bucket, staged[i].key_hash, *staged[i].value);
      }
      leaf_bytes[b] = encode_bucket(bucket);
      level_hashes[b] = {index, layout_.node_hash(leaf_bytes[b])};
      if (tracing_) out.stats.bucket_owner[b] = worker;
    }
  });
  out.batch.reserve(buckets * 2 + depth);
  for (std::size_t b = 0; b < buckets; ++b) {
    out.batch.emplace_back(NodePath{static_cast<std::uint8_t>(depth), level_hashes[b].index},
                           std::move(leaf_bytes[b]));
  }

  // Phase 3: walk up one level at a time. Children arrive sorted by index,
  // so siblings are adjacent and each parent is recomputed exactly once.
  fire("phase3");
  std::vector<NodeHash> parents;
  for (std::uint32_t level = depth; level-- > 0;) {
    if (level == depth / 2) fire("phase3-mid");
    parents.clear();
    for (std::size_t i = 0; i < level_hashes.size();) {
      const std::uint32_t parent = level_hashes[i].index >> 1;
      const NodePath path{static_cast<std::uint8_t>(level), parent};
      auto [l, r] = layout_.children_of(level, store_->get(path));
      while (i < level_hashes.size() && (level_hashes[i].index >> 1) == parent) {
        ((level_hashes[i].index & 1) ? r : l) = level_hashes[i].hash;
        ++i;
      }
      Bytes rec = encode_internal(l, r);
      parents.push_back({parent, layout_.node_hash(rec)});
      out.batch.emplace_back(path, std::move(rec));
      if (tracing_) out.stats.recomputed.push_back(path);
    }
    out.stats.internal_nodes += parents.size();
    std::swap(level_hashes, parents);
  }
  out.root = level_hashes.front().hash;
  return out;
}

Digest ConcurrentMerkleTree::commit(PreparedCommit&& prepared) {
  if (!prepared.batch.empty()) store_->apply(prepared.batch, prepared.root);
  last_stats_ = std::move(prepared.stats);
  staging_.clear();
  return get_root_hash();
}

}  // namespace ibex::merkle
