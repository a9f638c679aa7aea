// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/dag/components.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <utility>

namespace ibex::dag {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), 0U);
}

std::uint32_t DisjointSets::find(std::uint32_t x) {
  std::uint32_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) x = std::exchange(parent_[x], root);
  return root;
}

std::uint32_t DisjointSets::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return a;
}

ComponentSet connected_components(const DependencyGraph& g) {
  const std::size_t n = g.size();
  DisjointSets dsu(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.for_each_successor(static_cast<TxId>(i), [&](TxId to) { dsu.unite(static_cast<std::uint32_t>(i), to); });
  }
  std::vector<ComponentId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = dsu.find(static_cast<std::uint32_t>(i));
  return components_from_labels(std::move(labels));
}

ComponentSet components_from_labels(std::vector<ComponentId> labels) {
  constexpr ComponentId kUnset = std::numeric_limits<ComponentId>::max();
  ComponentSet out;
  out.comp_of.assign(labels.size(), kUnset);
  std::vector<ComponentId> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const ComponentId label = labels[i];
    if (label >= renumber.size()) renumber.resize(label + 1, kUnset);
    if (renumber[label] == kUnset) {
      renumber[label] = static_cast<ComponentId>(out.components.size());
      out.components.emplace_back();
    }
    const ComponentId c = renumber[label];
    out.comp_of[i] = c;
    out.components[c].push_back(static_cast<TxId>(i));
  }
  return out;
}

void dump_graph(std::ostream& out, const DependencyGraph& g, const ComponentSet& comps) {
  for (const auto& [from, to] : g.edges()) out << from << ' ' << to << '\n';
  out << "# components: " << comps.count() << '\n';
}

}  // namespace ibex::dag
