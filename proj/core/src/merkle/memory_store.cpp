// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <mutex>

#include "ibex/merkle/store.hpp"

namespace ibex::merkle {

std::optional<Bytes> MemoryStore::get(NodePath path) const {
  std::shared_lock lock(mu_);
  const auto it = nodes_.find(path.key());
  if (it == nodes_.end()) return std::nullopt;
  return it->second;
}

std::optional<Digest> MemoryStore::root() const {
  std::shared_lock lock(mu_);
  return root_;
}

void MemoryStore::apply(const WriteBatch& batch, const Digest& root) {
  if (fail_budget_.load() > 0) {
    fail_budget_.fetch_sub(1);
    throw StoreError("injected store write failure");
  }
  std::unique_lock lock(mu_);
  for (const auto& [path, bytes] : batch) nodes_[path.key()] = bytes;
  root_ = root;
  applies_.fetch_add(1);
}

std::size_t MemoryStore::node_count() const {
  std::shared_lock lock(mu_);
  return nodes_.size();
}

}  // namespace ibex::merkle
