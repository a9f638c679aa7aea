// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/coord/keyspace.hpp"

#include "ibex/common/codec.hpp"

namespace ibex::coord {

Bytes encode_leader(const LeaderRecord& r) {
  Writer w;
  w.u64(r.node);
  w.u64(r.term);
  w.u64(r.lease);
  return std::move(w).take();
}

LeaderRecord decode_leader(ByteView bytes) {
  Reader r(bytes);
  LeaderRecord out;
  out.node = r.u64();
  out.term = r.u64();
  out.lease = r.u64();
  r.expect_done();
  return out;
}

void KeySpace::check() const {
  if (!available_) throw CoordinationUnavailable("coordination store unreachable");
  ++operations_;
}

void KeySpace::put(const std::string& path, Bytes value, std::optional<LeaseId> lease) {
  check();
  if (lease && !leases_.contains(*lease)) throw std::invalid_argument("put with unknown lease");
  std::optional<Bytes> old;
  auto it = keys_.find(path);
  if (it != keys_.end()) old = it->second.value;
  bytes_written_ += value.size();
  keys_[path] = Entry{value, lease};
  notify(path, std::move(old), std::move(value));
}

std::optional<Bytes> KeySpace::get(const std::string& path) const {
  check();
  const auto it = keys_.find(path);
  if (it == keys_.end()) return std::nullopt;
  return it->second.value;
}

bool KeySpace::del(const std::string& path) {
  check();
  auto it = keys_.find(path);
  if (it == keys_.end()) return false;
  Bytes old = std::move(it->second.value);
  keys_.erase(it);
  notify(path, std::move(old), std::nullopt);
  return true;
}

std::vector<std::pair<std::string, Bytes>> KeySpace::list(const std::string& prefix) const {
  check();
  std::vector<std::pair<std::string, Bytes>> out;
  for (auto it = keys_.lower_bound(prefix); it != keys_.end() && it->first.starts_with(prefix); ++it) {
    out.emplace_back(it->first, it->second.value);
  }
  return out;
}

WatchId KeySpace::watch(NodeId subscriber, const std::string& prefix, WatchCallback cb) {
  check();
  const WatchId id = next_watch_++;
  watches_.emplace(id, Watch{subscriber, prefix, std::move(cb)});
  return id;
}

void KeySpace::cancel_watches(NodeId subscriber) {
  std::erase_if(watches_, [&](const auto& kv) { return kv.second.subscriber == subscriber; });
}

void KeySpace::notify(const std::string& path, std::optional<Bytes> old_value, std::optional<Bytes> new_value) {
  const std::uint64_t rev = ++revision_;
  for (const auto& [id, w] : watches_) {
    if (!path.starts_with(w.prefix)) continue;
    WatchEvent ev{path, old_value, new_value, rev};
    // Delivered through the loop so callbacks never re-enter the store
    // mid-operation. Same-instant events keep scheduling order.
    loop_->schedule_at(loop_->now(), [this, id, ev = std::move(ev)] {
      const auto it = watches_.find(id);
      if (it == watches_.end()) return;
      ++events_delivered_;
      it->second.cb(ev);
    });
  }
}

LeaseId KeySpace::grant_lease(NodeId owner, SimTime ttl) {
  check();
  if (ttl <= 0) throw std::invalid_argument("lease ttl must be positive");
  const LeaseId id = next_lease_++;
  leases_.emplace(id, Lease{id, owner, ttl, loop_->now()});
  schedule_expiry(id);
  return id;
}

bool KeySpace::keep_alive(LeaseId id) {
  check();
  auto it = leases_.find(id);
  if (it == leases_.end() || !it->second.live(loop_->now())) return false;
  it->second.last_renewal = loop_->now();
  schedule_expiry(id);
  return true;
}

void KeySpace::schedule_expiry(LeaseId id) {
  const Lease& l = leases_.at(id);
  loop_->schedule_at(l.last_renewal + l.ttl, [this, id] {
    const auto it = leases_.find(id);
    if (it != leases_.end() && !it->second.live(loop_->now())) expire(id);
  });
}

void KeySpace::expire(LeaseId id) {
  leases_.erase(id);
  std::vector<std::string> doomed;
  for (const auto& [path, e] : keys_) {
    if (e.lease == id) doomed.push_back(path);
  }
  for (const auto& path : doomed) {
    auto it = keys_.find(path);
    Bytes old = std::move(it->second.value);
    keys_.erase(it);
    notify(path, std::move(old), std::nullopt);
  }
}

void KeySpace::revoke(LeaseId id) {
  check();
  if (leases_.contains(id)) expire(id);
}

std::optional<Lease> KeySpace::lease(LeaseId id) const {
  const auto it = leases_.find(id);
  if (it == leases_.end()) return std::nullopt;
  return it->second;
}

bool KeySpace::campaign(NodeId node, std::uint64_t term, LeaseId lease_id) {
  check();
  if (term < highest_term_) return false;
  const auto l = leases_.find(lease_id);
  if (l == leases_.end() || l->second.owner != node || !l->second.live(loop_->now())) return false;
  if (const auto cur = keys_.find(std::string(kLeaderKey)); cur != keys_.end()) {
    const LeaderRecord held = decode_leader(cur->second.value);
    if (held.node != node) return false;
  }
  highest_term_ = term;
  put(std::string(kLeaderKey), encode_leader({node, term, lease_id}), lease_id);
  return true;
}

bool KeySpace::renew_leader(NodeId node, std::uint64_t term) {
  check();
  if (term < highest_term_) return false;
  const auto cur = keys_.find(std::string(kLeaderKey));
  if (cur == keys_.end()) return false;
  const LeaderRecord held = decode_leader(cur->second.value);
  if (held.node != node || held.term != term) return false;
  return keep_alive(held.lease);
}

std::optional<LeaderRecord> KeySpace::leader() const {
  check();
  const auto cur = keys_.find(std::string(kLeaderKey));
  if (cur == keys_.end()) return std::nullopt;
  return decode_leader(cur->second.value);
}

}  // namespace ibex::coord
