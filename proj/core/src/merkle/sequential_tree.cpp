// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/merkle/sequential_tree.hpp"

namespace ibex::merkle {

SequentialMerkleTree::SequentialMerkleTree(NodeStore& store, TreeConfig config)
    : layout_(config), store_(&store) {}

Digest SequentialMerkleTree::oracle_insert(const Address& key, Value value) {
  const std::uint32_t depth = layout_.depth();
  const Digest kh = layout_.key_hash(key);
  std::uint32_t index = layout_.bucket_of(kh);

  WriteBatch batch;
  batch.reserve(depth + 1);
  const NodePath leaf_path{static_cast<std::uint8_t>(depth), index};
  const auto existing = store_->get(leaf_path);
  LeafBucket bucket = existing ? decode_bucket(*existing) : LeafBucket{};
  upsert(bucket, kh, std::move(value));
  Bytes leaf = encode_bucket(bucket);
  Digest child = layout_.node_hash(leaf);
  batch.emplace_back(leaf_path, std::move(leaf));

  for (std::uint32_t level = depth; level-- > 0;) {
    const bool right = index & 1;
    index >>= 1;
    const NodePath path{static_cast<std::uint8_t>(level), index};
    auto [l, r] = layout_.children_of(level, store_->get(path));
    (right ? r : l) = child;
    Bytes rec = encode_internal(l, r);
    child = layout_.node_hash(rec);
    batch.emplace_back(path, std::move(rec));
  }
  store_->apply(batch, child);
  return child;
}

std::optional<Value> SequentialMerkleTree::get_value(const Address& key) const {
  const Digest kh = layout_.key_hash(key);
  const auto rec = store_->get({static_cast<std::uint8_t>(layout_.depth()), layout_.bucket_of(kh)});
  if (!rec) return std::nullopt;
  const LeafBucket bucket = decode_bucket(*rec);
  const Value* v = lookup(bucket, kh);
  if (!v) return std::nullopt;
  return *v;
}

Digest SequentialMerkleTree::get_root_hash() const { return store_->root().value_or(layout_.empty_root()); }

}  // namespace ibex::merkle
