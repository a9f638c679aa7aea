// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <oneapi/tbb/concurrent_hash_map.h>

#include <optional>
#include <utility>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex::merkle {

// Concurrent per-block write buffer. One entry per key; the last put wins.
class StagingMap {
public:
  void put(const Address& key, Value value) {
    Map::accessor acc;
    map_.insert(acc, key);
    acc->second = std::move(value);
  }

  std::optional<Value> get(const Address& key) const {
    Map::const_accessor acc;
    if (!map_.find(acc, key)) return std::nullopt;
    return acc->second;
  }

  void stage(const StateDelta& delta) {
    for (const auto& [k, v] : delta.writes()) put(k, v);
  }

  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  void clear() { map_.clear(); }

  // Not safe against concurrent put().
  std::vector<std::pair<Address, Value>> snapshot() const {
    return std::vector<std::pair<Address, Value>>(map_.begin(), map_.end());
  }

  StateDelta to_delta() const {
    StateDelta d;
    for (const auto& [k, v] : map_) d.put(k, v);
    return d;
  }

private:
  using Map = oneapi::tbb::concurrent_hash_map<Address, Value>;
  Map map_;
};

}  // namespace ibex::merkle
