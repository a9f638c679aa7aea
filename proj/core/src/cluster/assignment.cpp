// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/assignment.hpp"

#include <algorithm>
#include <stdexcept>

namespace ibex::cluster {

std::set<ComponentId> Assignment::owned_by(NodeId node) const {
  std::set<ComponentId> out;
  for (const auto& [c, n] : owner) {
    if (n == node) out.insert(c);
  }
  return out;
}

std::map<NodeId, std::size_t> Assignment::loads(const dag::ComponentSet& comps,
                                                const std::vector<NodeId>& nodes) const {
  std::map<NodeId, std::size_t> out;
  for (NodeId n : nodes) out[n] = 0;
  for (const auto& [c, n] : owner) {
    if (auto it = out.find(n); it != out.end()) it->second += comps.size_of(c);
  }
  return out;
}

namespace {

void place(Assignment& a, const dag::ComponentSet& comps, std::vector<ComponentId> todo,
           std::map<NodeId, std::size_t> load) {
  std::sort(todo.begin(), todo.end(), [&](ComponentId x, ComponentId y) {
    const auto sx = comps.size_of(x);
    const auto sy = comps.size_of(y);
    return sx != sy ? sx > sy : x < y;
  });
  for (ComponentId c : todo) {
    // std::map iterates ids ascending, so min_element keeps the lowest id.
    auto best = std::min_element(load.begin(), load.end(),
                                 [](const auto& l, const auto& r) { return l.second < r.second; });
    a.owner[c] = best->first;
    best->second += comps.size_of(c);
  }
}

}  // namespace

Assignment assign_followers(const dag::ComponentSet& comps, const std::vector<NodeId>& followers) {
  if (followers.empty()) throw std::invalid_argument("assignment needs at least one follower");
  Assignment a;
  std::map<NodeId, std::size_t> load;
  for (NodeId f : followers) load[f] = 0;
  std::vector<ComponentId> todo(comps.count());
  for (ComponentId c = 0; c < comps.count(); ++c) todo[c] = c;
  place(a, comps, std::move(todo), std::move(load));
  return a;
}

Assignment reassign_on_crash(const Assignment& a, const dag::ComponentSet& comps, NodeId crashed,
                             const std::vector<NodeId>& live, const std::set<ComponentId>& complete) {
  std::vector<NodeId> targets;
  for (NodeId n : live) {
    if (n != crashed) targets.push_back(n);
  }
  if (targets.empty()) throw std::invalid_argument("no live follower to reassign to");
  Assignment out = a;
  ++out.version;
  std::vector<ComponentId> todo;
  for (const auto& [c, n] : a.owner) {
    if (n == crashed && !complete.contains(c)) todo.push_back(c);
  }
  place(out, comps, std::move(todo), out.loads(comps, targets));
  return out;
}

}  // namespace ibex::cluster
