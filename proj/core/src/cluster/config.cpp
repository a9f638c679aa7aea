// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/config.hpp"

#include <charconv>
#include <fstream>
#include <string>

namespace ibex::cluster {

std::string_view transport_name(Transport t) { return t == Transport::kStore ? "store" : "msg"; }

Transport parse_transport(std::string_view s) {
  if (s == "store") return Transport::kStore;
  if (s == "msg") return Transport::kMsg;
  throw ConfigError("unknown transport '" + std::string(s) + "'");
}

void ClusterConfig::validate() const {
  if (cluster_size == 0) throw ConfigError("cluster_size must be positive");
  if (scheduler_threads == 0) throw ConfigError("scheduler_threads must be positive");
  if (dag_threads == 0) throw ConfigError("dag_threads must be positive");
  if (heartbeat_ms <= 0 || ttl_ms <= 0) throw ConfigError("heartbeat_ms and ttl_ms must be positive");
  if (heartbeat_ms >= ttl_ms) throw ConfigError("heartbeat_ms must be below ttl_ms");
  tree.validate();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t number(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

ClusterConfig parse_config(std::istream& in, ClusterConfig cfg) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line) + ": expected key=value");
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view val = trim(text.substr(eq + 1));
    if (key == "cluster_size") {
      cfg.cluster_size = number(key, val);
    } else if (key == "scheduler_threads") {
      cfg.scheduler_threads = number(key, val);
    } else if (key == "dag_threads") {
      cfg.dag_threads = number(key, val);
    } else if (key == "heartbeat_ms") {
      cfg.heartbeat_ms = static_cast<coord::SimTime>(number(key, val));
    } else if (key == "ttl_ms") {
      cfg.ttl_ms = static_cast<coord::SimTime>(number(key, val));
    } else if (key == "transport") {
      cfg.transport = parse_transport(val);
    } else if (key == "leader_executes") {
      if (val != "true" && val != "false") throw ConfigError("leader_executes must be true or false");
      cfg.leader_executes = val == "true";
    } else if (key == "tree_depth") {
      cfg.tree.depth = static_cast<unsigned>(number(key, val));
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ClusterConfig load_config(const std::filesystem::path& path, ClusterConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

}  // namespace ibex::cluster
