// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/merkle/layout.hpp"

#include <algorithm>
#include <stdexcept>

namespace ibex::merkle {

void TreeConfig::validate() const {
  if (depth < 1 || depth > 32) throw std::invalid_argument("tree depth must be in [1, 32]");
}

Bytes encode_bucket(const LeafBucket& bucket) {
  Bytes out;
  std::size_t size = 5;
  for (const auto& e : bucket) size += 36 + e.value.size();
  out.reserve(size);
  out.push_back(kLeafTag);
  put_u32(out, static_cast<std::uint32_t>(bucket.size()));
  for (const auto& e : bucket) {
    out.insert(out.end(), e.key_hash.begin(), e.key_hash.end());
    put_u32(out, static_cast<std::uint32_t>(e.value.size()));
    out.insert(out.end(), e.value.begin(), e.value.end());
  }
  return out;
}

LeafBucket decode_bucket(ByteView bytes) {
  if (bytes.size() < 5 || bytes[0] != kLeafTag) throw DecodeError("not a leaf bucket");
  const std::uint32_t n = get_u32(bytes.data() + 1);
  LeafBucket out;
  out.reserve(n);
  std::size_t pos = 5;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (bytes.size() - pos < 36) throw DecodeError("truncated leaf bucket");
    BucketEntry e;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), 32, e.key_hash.begin());
    const std::uint32_t len = get_u32(bytes.data() + pos + 32);
    pos += 36;
    if (bytes.size() - pos < len) throw DecodeError("truncated leaf value");
    e.value.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    out.push_back(std::move(e));
  }
  if (pos != bytes.size()) throw DecodeError("trailing bytes in leaf bucket");
  return out;
}

void upsert(LeafBucket& bucket, const Digest& key_hash, Value value) {
  auto it = std::lower_bound(bucket.begin(), bucket.end(), key_hash,
                             [](const BucketEntry& e, const Digest& k) { return e.key_hash < k; });
  if (it != bucket.end() && it->key_hash == key_hash) {
    it->value = std::move(value);
  } else {
    bucket.insert(it, BucketEntry{key_hash, std::move(value)});
  }
}

const Value* lookup(const LeafBucket& bucket, const Digest& key_hash) {
  auto it = std::lower_bound(bucket.begin(), bucket.end(), key_hash,
                             [](const BucketEntry& e, const Digest& k) { return e.key_hash < k; });
  return (it != bucket.end() && it->key_hash == key_hash) ? &it->value : nullptr;
}

Bytes encode_internal(const Digest& left, const Digest& right) {
  Bytes out;
  out.reserve(65);
  out.push_back(kInternalTag);
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

std::pair<Digest, Digest> decode_internal(ByteView bytes) {
  if (bytes.size() != 65 || bytes[0] != kInternalTag) throw DecodeError("not an internal node");
  std::pair<Digest, Digest> out;
  std::copy_n(bytes.begin() + 1, 32, out.first.begin());
  std::copy_n(bytes.begin() + 33, 32, out.second.begin());
  return out;
}

Layout::Layout(TreeConfig config) : config_(config) {
  config_.validate();
  defaults_.resize(config_.depth + 1);
  defaults_[config_.depth] = node_hash(encode_bucket({}));
  for (std::uint32_t l = config_.depth; l-- > 0;) {
    defaults_[l] = node_hash(encode_internal(defaults_[l + 1], defaults_[l + 1]));
  }
}

std::uint32_t Layout::bucket_of(const Digest& key_hash) const {
  const std::uint32_t prefix = get_u32(key_hash.data());
  return config_.depth == 32 ? prefix : prefix >> (32 - config_.depth);
}

std::pair<Digest, Digest> Layout::children_of(std::uint32_t level, const std::optional<Bytes>& record) const {
  if (!record) return {defaults_[level + 1], defaults_[level + 1]};
  return decode_internal(*record);
}

}  // namespace ibex::merkle
