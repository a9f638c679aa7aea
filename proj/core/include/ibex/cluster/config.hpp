// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string_view>

#include "ibex/coord/election.hpp"
#include "ibex/coord/fabric.hpp"
#include "ibex/merkle/layout.hpp"

namespace ibex::cluster {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Transport : std::uint8_t { kStore, kMsg };

std::string_view transport_name(Transport t);
Transport parse_transport(std::string_view s);

struct ClusterConfig {
  std::size_t cluster_size = 3;
  std::size_t scheduler_threads = 4;
  std::size_t dag_threads = 1;
  coord::SimTime heartbeat_ms = 300;
  coord::SimTime ttl_ms = 1000;
  Transport transport = Transport::kMsg;
  bool leader_executes = false;

  // Simulated execution cost per transaction, in microseconds.
  std::uint64_t exec_cost_us = 20;
  // Simulated time allowed per block before the run is declared stalled.
  coord::SimTime block_budget_ms = 60'000;

  merkle::TreeConfig tree;
  coord::FabricOptions fabric;
  coord::ElectionOptions election;

  void validate() const;
};

// key=value lines; '#' starts a comment. Recognised keys: cluster_size,
// scheduler_threads, dag_threads, heartbeat_ms, ttl_ms, transport,
// leader_executes, tree_depth.
ClusterConfig parse_config(std::istream& in, ClusterConfig base = {});
ClusterConfig load_config(const std::filesystem::path& path, ClusterConfig base = {});

}  // namespace ibex::cluster
