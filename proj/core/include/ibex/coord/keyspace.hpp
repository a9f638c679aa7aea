// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibex/common/bytes.hpp"
#include "ibex/coord/event_loop.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::coord {

using LeaseId = std::uint64_t;
using WatchId = std::uint64_t;

class CoordinationUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Lease {
  LeaseId id = 0;
  NodeId owner = 0;
  SimTime ttl = 0;
  SimTime last_renewal = 0;

  bool live(SimTime now) const { return now - last_renewal < ttl; }
};

struct WatchEvent {
  std::string path;
  std::optional<Bytes> old_value;
  std::optional<Bytes> new_value;
  std::uint64_t revision = 0;
};

using WatchCallback = std::function<void(const WatchEvent&)>;

struct LeaderRecord {
  NodeId node = 0;
  std::uint64_t term = 0;
  LeaseId lease = 0;
};

inline constexpr std::string_view kLeaderKey = "/leader";

// Operations the cluster needs from a coordination service. A binding to an
// external store implements this interface.
class CoordinationStore {
public:
  virtual ~CoordinationStore() = default;

  virtual SimTime now() const = 0;

  virtual void put(const std::string& path, Bytes value, std::optional<LeaseId> lease = std::nullopt) = 0;
  virtual std::optional<Bytes> get(const std::string& path) const = 0;
  virtual bool del(const std::string& path) = 0;
  virtual std::vector<std::pair<std::string, Bytes>> list(const std::string& prefix) const = 0;

  // Every later modification under `prefix` is delivered to `cb` in order,
  // until the subscriber's watches are cancelled.
  virtual WatchId watch(NodeId subscriber, const std::string& prefix, WatchCallback cb) = 0;
  virtual void cancel_watches(NodeId subscriber) = 0;

  virtual LeaseId grant_lease(NodeId owner, SimTime ttl) = 0;
  // False if the lease already expired or was revoked.
  virtual bool keep_alive(LeaseId lease) = 0;
  virtual void revoke(LeaseId lease) = 0;
  virtual std::optional<Lease> lease(LeaseId id) const = 0;

  // Binds the leader key to `node` under `lease`. Refused while another
  // node holds it or when `term` is older than a term already seen.
  virtual bool campaign(NodeId node, std::uint64_t term, LeaseId lease) = 0;
  // Keep-alive for the leader lease, refused for a stale holder or term.
  virtual bool renew_leader(NodeId node, std::uint64_t term) = 0;
  virtual std::optional<LeaderRecord> leader() const = 0;
};

// In-process key space on the simulated clock: keys, leases with TTL expiry,
// prefix watches and a fenced leader key.
class KeySpace final : public CoordinationStore {
public:
  explicit KeySpace(EventLoop& loop) : loop_(&loop) {}

  SimTime now() const override { return loop_->now(); }

  void put(const std::string& path, Bytes value, std::optional<LeaseId> lease = std::nullopt) override;
  std::optional<Bytes> get(const std::string& path) const override;
  bool del(const std::string& path) override;
  std::vector<std::pair<std::string, Bytes>> list(const std::string& prefix) const override;

  WatchId watch(NodeId subscriber, const std::string& prefix, WatchCallback cb) override;
  void cancel_watches(NodeId subscriber) override;

  LeaseId grant_lease(NodeId owner, SimTime ttl) override;
  bool keep_alive(LeaseId lease) override;
  void revoke(LeaseId lease) override;
  std::optional<Lease> lease(LeaseId id) const override;

  bool campaign(NodeId node, std::uint64_t term, LeaseId lease) override;
  bool renew_leader(NodeId node, std::uint64_t term) override;
  std::optional<LeaderRecord> leader() const override;

  // While unavailable every operation throws CoordinationUnavailable.
  void set_available(bool on) { available_ = on; }

  std::uint64_t revision() const { return revision_; }
  std::uint64_t operations() const { return operations_; }
  std::uint64_t bytes_written() const { return bytes_written_; }
  std::uint64_t events_delivered() const { return events_delivered_; }
  std::uint64_t highest_term() const { return highest_term_; }

private:
  struct Entry {
    Bytes value;
    std::optional<LeaseId> lease;
  };
  struct Watch {
    NodeId subscriber;
    std::string prefix;
    WatchCallback cb;
  };

  void check() const;
  void notify(const std::string& path, std::optional<Bytes> old_value, std::optional<Bytes> new_value);
  void schedule_expiry(LeaseId id);
  void expire(LeaseId id);

  EventLoop* loop_;
  bool available_ = true;
  std::map<std::string, Entry> keys_;
  std::map<LeaseId, Lease> leases_;
  std::map<WatchId, Watch> watches_;
  LeaseId next_lease_ = 1;
  WatchId next_watch_ = 1;
  std::uint64_t revision_ = 0;
  std::uint64_t highest_term_ = 0;
  mutable std::uint64_t operations_ = 0;
  std::uint64_t bytes_written_ = 0;
  std::uint64_t events_delivered_ = 0;
};

Bytes encode_leader(const LeaderRecord& r);
LeaderRecord decode_leader(ByteView bytes);

}  // namespace ibex::coord
