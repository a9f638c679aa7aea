// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/coord/election.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "ibex/common/codec.hpp"
#include "ibex/common/rng.hpp"

namespace ibex::coord {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kFollower: return "follower";
    case Role::kCandidate: return "candidate";
    case Role::kLeader: return "leader";
  }
  return "unknown";
}

namespace {

Bytes pair_u64(std::uint64_t a, std::uint64_t b) {
  Writer w;
  w.u64(a);
  w.u64(b);
  return std::move(w).take();
}

std::pair<std::uint64_t, std::uint64_t> read_pair(ByteView bytes) {
  Reader r(bytes);
  const auto a = r.u64();
  const auto b = r.u64();
  r.expect_done();
  return {a, b};
}

}  // namespace

Bytes encode(const RequestVoteMsg& m) { return pair_u64(m.term, m.candidate); }
Bytes encode(const VoteMsg& m) { return pair_u64(m.term, m.granted ? 1 : 0); }
Bytes encode(const HeartbeatMsg& m) { return pair_u64(m.term, m.leader); }

RequestVoteMsg decode_request_vote(ByteView b) {
  auto [t, c] = read_pair(b);
  return {t, c};
}
VoteMsg decode_vote(ByteView b) {
  auto [t, g] = read_pair(b);
  if (g > 1) throw DecodeError("vote flag out of range");
  return {t, g == 1};
}
HeartbeatMsg decode_heartbeat(ByteView b) {
  auto [t, l] = read_pair(b);
  return {t, l};
}

ElectionCore::ElectionCore(NodeId self, std::vector<NodeId> members) : self_(self), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!std::binary_search(members_.begin(), members_.end(), self_)) {
    throw std::invalid_argument("node is not a member of its cluster");
  }
}

void ElectionCore::observe_term(std::uint64_t term) {
  if (term <= term_) return;
  term_ = term;
  role_ = Role::kFollower;
  voted_for_.reset();
  leader_.reset();
  votes_.clear();
}

bool ElectionCore::start_election(const Send& send) {
  ++term_;
  role_ = Role::kCandidate;
  voted_for_ = self_;
  leader_.reset();
  votes_ = {self_};
  if (votes_.size() >= majority()) {
    role_ = Role::kLeader;
    leader_ = self_;
    return true;
  }
  const Bytes req = encode(RequestVoteMsg{term_, self_});
  for (NodeId m : members_) {
    if (m != self_) send(m, MessageKind::kRequestVote, req);
  }
  return false;
}

bool ElectionCore::on_message(const Message& msg, const Send& send) {
  switch (msg.kind) {
    case MessageKind::kRequestVote: {
      const auto req = decode_request_vote(msg.payload);
      observe_term(req.term);
      bool grant = false;
      if (req.term == term_ && (!voted_for_ || *voted_for_ == req.candidate)) {
        voted_for_ = req.candidate;
        grant = true;
      }
      send(msg.from, MessageKind::kVote, encode(VoteMsg{term_, grant}));
      return false;
    }
    case MessageKind::kVote: {
      const auto v = decode_vote(msg.payload);
      observe_term(v.term);
      if (role_ != Role::kCandidate || v.term != term_ || !v.granted) return false;
      votes_.insert(msg.from);
      if (votes_.size() >= majority()) {
        role_ = Role::kLeader;
        leader_ = self_;
        return true;
      }
      return false;
    }
    case MessageKind::kHeartbeat: {
      const auto hb = decode_heartbeat(msg.payload);
      if (hb.term < term_) {
        // Tells a deposed leader about the newer term.
        send(msg.from, MessageKind::kVote, encode(VoteMsg{term_, false}));
        return false;
      }
      observe_term(hb.term);
      role_ = Role::kFollower;
      leader_ = hb.leader;
      return false;
    }
    default:
      return false;
  }
}

void ElectionCore::broadcast_heartbeat(const Send& send) const {
  if (role_ != Role::kLeader) return;
  const Bytes hb = encode(HeartbeatMsg{term_, self_});
  for (NodeId m : members_) {
    if (m != self_) send(m, MessageKind::kHeartbeat, hb);
  }
}

void ElectionCore::accept_leader(NodeId leader, std::uint64_t term) {
  observe_term(term);
  if (term == term_ && leader != self_) {
    role_ = Role::kFollower;
    leader_ = leader;
  }
}

void ElectionCore::restart() {
  role_ = Role::kFollower;
  leader_.reset();
  votes_.clear();
}

namespace {

class ElectionSim {
public:
  explicit ElectionSim(const ElectionSetup& s)
      : setup_(s), fabric_(loop_, s.fabric), rng_(s.seed ^ 0x9e3779b97f4a7c15ULL) {
    for (NodeId id : s.members) {
      auto& n = nodes_[id];
      n.core = std::make_unique<ElectionCore>(id, s.members);
      n.core->observe_term(s.start_term);
      fabric_.attach(id, [this, id](const Message& m) { on_message(id, m); });
    }
    for (NodeId id : s.crashed) crash(id);
    for (auto& [id, n] : nodes_) {
      if (n.up) arm_timer(id);
    }
    FaultInjector::Hooks hooks;
    hooks.crash = [this](NodeId id) { crash(id); };
    hooks.restart = [this](NodeId id) { restart(id); };
    hooks.leader = [this]() -> std::optional<NodeId> {
      for (auto& [id, n] : nodes_) {
        if (n.up && n.core->role() == Role::kLeader) return id;
      }
      return std::nullopt;
    };
    hooks.live_followers = [this] {
      std::vector<NodeId> out;
      for (auto& [id, n] : nodes_) {
        if (n.up && n.core->role() != Role::kLeader) out.push_back(id);
      }
      return out;
    };
    injector_ = std::make_unique<FaultInjector>(loop_, s.faults, s.members, std::move(hooks));
    injector_->arm();
  }

  ElectionResult run() {
    ElectionResult out;
    const bool done = loop_.run_until([this] { return settled(); }, setup_.deadline_ms);
    out.elapsed_ms = loop_.now();
    out.leaders_by_term = leaders_by_term_;
    for (auto& [id, n] : nodes_) out.highest_term = std::max(out.highest_term, n.core->term());
    for (const auto& [term, set] : leaders_by_term_) {
      if (set.size() > 1) out.safe = false;
    }
    if (done) {
      for (auto& [id, n] : nodes_) {
        if (n.up && n.core->role() == Role::kLeader) {
          out.leader = id;
          out.term = n.core->term();
        }
      }
    }
    return out;
  }

private:
  struct Node {
    std::unique_ptr<ElectionCore> core;
    bool up = true;
    std::uint64_t timer_gen = 0;
  };

  ElectionCore::Send sender(NodeId from) {
    return [this, from](NodeId to, MessageKind kind, Bytes payload) {
      fabric_.send(Message{from, to, kind, std::move(payload)});
    };
  }

  bool settled() const {
    std::optional<NodeId> leader;
    std::uint64_t term = 0;
    for (const auto& [id, n] : nodes_) {
      if (n.up && n.core->role() == Role::kLeader) {
        leader = id;
        term = n.core->term();
      }
    }
    if (!leader) return false;
    for (const auto& [id, n] : nodes_) {
      if (!n.up) continue;
      if (n.core->leader() != leader || n.core->term() != term) return false;
    }
    return true;
  }

  void arm_timer(NodeId id) {
    auto& n = nodes_.at(id);
    const std::uint64_t gen = ++n.timer_gen;
    const SimTime t = rng_.between(setup_.options.timeout_min_ms, setup_.options.timeout_max_ms);
    loop_.schedule_after(t, [this, id, gen] {
      auto& node = nodes_.at(id);
      if (!node.up || node.timer_gen != gen || node.core->role() == Role::kLeader) return;
      if (node.core->start_election(sender(id))) became_leader(id);
      arm_timer(id);
    });
  }

  void became_leader(NodeId id) {
    auto& n = nodes_.at(id);
    leaders_by_term_[n.core->term()].insert(id);
    heartbeat(id, n.core->term());
  }

  void heartbeat(NodeId id, std::uint64_t term) {
    auto& n = nodes_.at(id);
    if (!n.up || n.core->role() != Role::kLeader || n.core->term() != term) return;
    n.core->broadcast_heartbeat(sender(id));
    loop_.schedule_after(setup_.options.heartbeat_ms, [this, id, term] { heartbeat(id, term); });
  }

  void on_message(NodeId id, const Message& m) {
    auto& n = nodes_.at(id);
    const bool was_leader = n.core->role() == Role::kLeader;
    const std::uint64_t before = n.core->term();
    if (n.core->on_message(m, sender(id))) became_leader(id);
    const bool heard = m.kind == MessageKind::kHeartbeat && decode_heartbeat(m.payload).term >= before;
    const bool granted_or_heard =
        heard || (m.kind == MessageKind::kRequestVote && n.core->voted_for() == m.from);
    if (n.core->role() != Role::kLeader && (granted_or_heard || n.core->term() != before || was_leader)) {
      arm_timer(id);
    }
  }

  void crash(NodeId id) {
    auto& n = nodes_.at(id);
    n.up = false;
    ++n.timer_gen;
    fabric_.set_up(id, false);
  }

  void restart(NodeId id) {
    auto& n = nodes_.at(id);
    if (n.up) return;
    n.up = true;
    n.core->restart();
    fabric_.set_up(id, true);
    arm_timer(id);
  }

  const ElectionSetup& setup_;
  EventLoop loop_;
  Fabric fabric_;
  Rng rng_;
  std::map<NodeId, Node> nodes_;
  std::unique_ptr<FaultInjector> injector_;
  std::map<std::uint64_t, std::set<NodeId>> leaders_by_term_;
};

}  // namespace

ElectionResult elect_leader(const ElectionSetup& setup) {
  if (setup.members.empty()) throw std::invalid_argument("election needs at least one member");
  ElectionSim sim(setup);
  return sim.run();
}

}  // namespace ibex::coord
