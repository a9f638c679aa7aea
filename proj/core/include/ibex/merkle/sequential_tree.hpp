// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>

#include "ibex/merkle/layout.hpp"
#include "ibex/merkle/store.hpp"

namespace ibex::merkle {

// Baseline tree: every insert rewrites the leaf, recomputes the whole path
// and commits the new root immediately.
class SequentialMerkleTree {
public:
  SequentialMerkleTree(NodeStore& store, TreeConfig config = {});

  const Layout& layout() const { return layout_; }

  Digest oracle_insert(const Address& key, Value value);
  std::optional<Value> get_value(const Address& key) const;
  Digest get_root_hash() const;

private:
  Layout layout_;
  NodeStore* store_;
};

}  // namespace ibex::merkle
