// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <set>
#include <vector>

#include "ibex/dag/components.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::cluster {

using dag::ComponentId;

struct Assignment {
  std::map<ComponentId, NodeId> owner;
  std::uint64_t version = 0;

  std::set<ComponentId> owned_by(NodeId node) const;
  // Assigned transaction count per node, for the given nodes.
  std::map<NodeId, std::size_t> loads(const dag::ComponentSet& comps, const std::vector<NodeId>& nodes) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Largest component first onto the least-loaded follower (load = assigned
// transactions). Ties: component id ascending, follower id ascending.
Assignment assign_followers(const dag::ComponentSet& comps, const std::vector<NodeId>& followers);

// Moves the crashed node's components that are not in `complete` onto the
// live followers with the same greedy rule and bumps the version.
Assignment reassign_on_crash(const Assignment& a, const dag::ComponentSet& comps, NodeId crashed,
                             const std::vector<NodeId>& live, const std::set<ComponentId>& complete = {});

}  // namespace ibex::cluster
