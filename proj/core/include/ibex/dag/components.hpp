// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ibex/dag/graph.hpp"

namespace ibex::dag {

using ComponentId = std::uint32_t;

// Disjoint-set union with path compression and union by size.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n);

  std::uint32_t find(std::uint32_t x);
  // Returns the surviving root. The larger set's root survives; ties keep a.
  std::uint32_t unite(std::uint32_t a, std::uint32_t b);
  std::uint32_t set_size(std::uint32_t x) { return size_[find(x)]; }
  std::size_t count() const { return parent_.size(); }

  const std::vector<std::uint32_t>& parents() const { return parent_; }

private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

// Partition of a block's transactions into connected conflict components.
// Component ids are assigned in order of each component's smallest tx id.
struct ComponentSet {
  std::vector<ComponentId> comp_of;
  std::vector<std::vector<TxId>> components;  // each sorted ascending

  std::size_t count() const { return components.size(); }
  std::size_t size_of(ComponentId c) const { return components[c].size(); }

  friend bool operator==(const ComponentSet&, const ComponentSet&) = default;
};

ComponentSet connected_components(const DependencyGraph& g);

// Rebuilds a ComponentSet from comp_of alone (used on the receiving side of
// a component assignment).
ComponentSet components_from_labels(std::vector<ComponentId> comp_of);

// Debug dump: `i j` per edge, then `# components: k`.
void dump_graph(std::ostream& out, const DependencyGraph& g, const ComponentSet& comps);

}  // namespace ibex::dag
