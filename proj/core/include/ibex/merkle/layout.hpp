// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ibex/common/hash.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::merkle {

// Fixed-depth sparse binary trie over the first `depth` bits of H(key).
// Leaves are buckets of (key hash, value) pairs. All nodes of one cluster must
// share the same config for roots to compare.
struct TreeConfig {
  std::uint32_t depth = 24;
  HashId hash = HashId::kSha256;

  void validate() const;
  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

// Position of a node: level 0 is the root, level `depth` holds the buckets.
struct NodePath {
  std::uint8_t level = 0;
  std::uint32_t index = 0;

  std::uint64_t key() const { return (std::uint64_t{level} << 32) | index; }
  static NodePath from_key(std::uint64_t k) {
    return {static_cast<std::uint8_t>(k >> 32), static_cast<std::uint32_t>(k)};
  }
  friend bool operator==(const NodePath&, const NodePath&) = default;
  friend auto operator<=>(const NodePath& a, const NodePath& b) { return a.key() <=> b.key(); }
};

inline constexpr std::uint8_t kLeafTag = 0x00;
inline constexpr std::uint8_t kInternalTag = 0x01;

struct BucketEntry {
  Digest key_hash;
  Value value;
  friend bool operator==(const BucketEntry&, const BucketEntry&) = default;
};

// Sorted by key_hash, unique.
using LeafBucket = std::vector<BucketEntry>;

// 0x00 || count:u32 || (key_hash || len:u32 || value)*
Bytes encode_bucket(const LeafBucket& bucket);
LeafBucket decode_bucket(ByteView bytes);
// Inserts or replaces the entry for key_hash, keeping the bucket sorted.
void upsert(LeafBucket& bucket, const Digest& key_hash, Value value);
const Value* lookup(const LeafBucket& bucket, const Digest& key_hash);

// 0x01 || left || right
Bytes encode_internal(const Digest& left, const Digest& right);
std::pair<Digest, Digest> decode_internal(ByteView bytes);

// Precomputed hashes of empty subtrees, indexed by level.
class Layout {
public:
  explicit Layout(TreeConfig config);

  const TreeConfig& config() const { return config_; }
  std::uint32_t depth() const { return config_.depth; }

  Digest key_hash(const Address& key) const { return hash256(config_.hash, key.view()); }
  std::uint32_t bucket_of(const Digest& key_hash) const;

  Digest node_hash(ByteView node_bytes) const { return hash256(config_.hash, node_bytes); }
  const Digest& default_hash(std::uint32_t level) const { return defaults_[level]; }
  const Digest& empty_root() const { return defaults_[0]; }

  // Children hashes stored in an internal node, defaulting when absent.
  std::pair<Digest, Digest> children_of(std::uint32_t level, const std::optional<Bytes>& record) const;

private:
  TreeConfig config_;
  std::vector<Digest> defaults_;
};

}  // namespace ibex::merkle
