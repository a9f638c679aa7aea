// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/node.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ibex/common/codec.hpp"
#include "ibex/domain/encoding.hpp"
#include "ibex/sched/scheduler.hpp"

namespace ibex::cluster {

using coord::MessageKind;

namespace {

struct NodeCrashed {};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

class CommittedView : public StateView {
public:
  explicit CommittedView(const merkle::ConcurrentMerkleTree& tree) : tree_(&tree) {}
  std::optional<Value> get(const Address& key) const override { return tree_->get_value(key); }

private:
  const merkle::ConcurrentMerkleTree* tree_;
};

struct CommittedRecord {
  std::uint64_t height = 0;
  Digest root{};
  Digest block_hash{};
};

Bytes encode_committed(const CommittedRecord& c) {
  Writer w;
  w.u64(c.height);
  w.digest(c.root);
  w.digest(c.block_hash);
  return std::move(w).take();
}

CommittedRecord decode_committed(ByteView b) {
  Reader r(b);
  CommittedRecord c;
  c.height = r.u64();
  c.root = r.digest();
  c.block_hash = r.digest();
  r.expect_done();
  return c;
}

Bytes encode_pending(bool validation, const Block& block) {
  Writer w;
  w.u64(validation ? 1 : 0);
  w.bytes(canonical_encode(block));
  return std::move(w).take();
}

std::pair<bool, Block> decode_pending(ByteView b) {
  Reader r(b);
  const bool validation = r.u64() == 1;
  const Bytes block = r.bytes();
  r.expect_done();
  return {validation, decode_block(block)};
}

std::optional<NodeId> trailing_id(std::string_view path) {
  const auto slash = path.rfind('/');
  if (slash == std::string_view::npos) return std::nullopt;
  const std::string_view tail = path.substr(slash + 1);
  NodeId id = 0;
  const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), id);
  if (ec != std::errc() || p != tail.data() + tail.size()) return std::nullopt;
  return id;
}

dag::ComponentSet components_from_lists(std::vector<std::vector<TxId>> lists, std::size_t tx_count) {
  dag::ComponentSet cs;
  cs.comp_of.assign(tx_count, 0);
  std::vector<bool> seen(tx_count, false);
  for (std::size_t c = 0; c < lists.size(); ++c) {
    for (TxId t : lists[c]) {
      if (t >= tx_count || seen[t]) throw DecodeError("component lists do not partition the block");
      seen[t] = true;
      cs.comp_of[t] = static_cast<dag::ComponentId>(c);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DecodeError("component lists do not cover the block");
  }
  cs.components = std::move(lists);
  return cs;
}

}  // namespace

namespace paths {
std::string member(NodeId id) { return std::string(kMembers) + std::to_string(id); }
std::string assign(std::uint64_t h) { return "/assign/" + std::to_string(h); }
std::string state_prefix(std::uint64_t h) { return "/state/" + std::to_string(h) + "/"; }
std::string state(std::uint64_t h, NodeId node) { return state_prefix(h) + std::to_string(node); }
std::string merged(std::uint64_t h) { return state_prefix(h) + "merged"; }
std::string chain(std::uint64_t h) { return "/chain/" + std::to_string(h); }
}  // namespace paths

SimContext::SimContext(ClusterConfig cfg, std::uint64_t seed, bool trace)
    : config(std::move(cfg)),
      fabric(loop,
             [&] {
               auto f = config.fabric;
               f.seed = seed;
               f.trace = trace;
               return f;
             }()),
      keys(loop),
      rng(seed ^ 0x5bd1e995ULL) {}

void SimContext::log(const std::string& line) { events.push_back("t=" + std::to_string(loop.now()) + " " + line); }

void SimContext::crash(NodeId id) {
  auto& n = *nodes.at(id);
  if (!n.up()) return;
  log("crash node " + std::to_string(id));
  n.crash();
}

void SimContext::restart(NodeId id) {
  auto& n = *nodes.at(id);
  if (n.up()) return;
  log("restart node " + std::to_string(id));
  n.restart();
}

void SimContext::phase(std::string_view name, std::uint64_t height) {
  if (injector) injector->on_phase(name, height);
}

Node::Node(SimContext& ctx, NodeId id, const StateDelta& genesis)
    : ctx_(ctx),
      id_(id),
      core_(id, ctx.members),
      store_(std::make_unique<merkle::MemoryStore>()),
      tree_(*store_, ctx.config.tree) {
  if (!genesis.empty()) {
    tree_.staging().stage(genesis);
    tree_.parallel_insert_from_map(ctx_.config.scheduler_threads);
  }
  tree_.set_commit_hook([this](std::string_view point) {
    if (leading_ && lb_) marker(point);
  });
  ctx_.fabric.attach(id_, [this](const coord::Message& m) { on_message(m); });
}

template <class F>
void Node::guarded(F&& f) {
  if (!up_) return;
  try {
    f();
  } catch (const NodeCrashed&) {
  } catch (const coord::CoordinationUnavailable& e) {
    healthy_ = false;
    ctx_.log("node " + std::to_string(id_) + " unhealthy: " + e.what());
  }
}

template <class F>
auto Node::coord_call(F&& f) {
  struct Timer {
    double* sink;
    Clock::time_point t0 = Clock::now();
    ~Timer() { *sink += ms_since(t0); }
  } timer{&coord_ms_};
  return f();
}

template <class F>
auto Node::phase(double PhaseTimings::*slot, F&& f) {
  const double c0 = coord_ms_;
  const auto t0 = Clock::now();
  f();
  if (lb_) lb_->timings.*slot += ms_since(t0) - (coord_ms_ - c0);
}

void Node::marker(std::string_view p) {
  ctx_.phase(p, lb_ ? lb_->height : height_ + 1);
  if (!up_) throw NodeCrashed{};
}

void Node::send(NodeId to, MessageKind kind, Bytes payload) {
  coord_call([&] { ctx_.fabric.send(coord::Message{id_, to, kind, std::move(payload)}); });
}

void Node::start() {
  guarded([&] {
    member_lease_ = coord_call([&] { return ctx_.keys.grant_lease(id_, ctx_.config.ttl_ms); });
    coord_call([&] { ctx_.keys.put(paths::member(id_), encode_u64_value(id_), member_lease_); });
    ctx_.keys.watch(id_, std::string(coord::kLeaderKey), [this](const coord::WatchEvent& ev) {
      guarded([&] { on_leader_event(ev); });
    });
    ctx_.keys.watch(id_, std::string(paths::kMembers), [this](const coord::WatchEvent& ev) {
      guarded([&] { on_member_event(ev); });
    });
    ctx_.keys.watch(id_, "/state/", [this](const coord::WatchEvent& ev) {
      guarded([&] { on_state_event(ev); });
    });
    if (const auto cur = ctx_.keys.leader(); cur && cur->node != id_) {
      core_.accept_leader(cur->node, cur->term);
      leader_ = cur->node;
    } else {
      arm_election();
    }
    const auto ep = epoch_;
    ctx_.loop.schedule_after(ctx_.config.heartbeat_ms, [this, ep] { renew(ep); });
  });
}

void Node::renew(std::uint64_t ep) {
  if (ep != epoch_ || !up_) return;
  guarded([&] {
    if (!ctx_.keys.keep_alive(member_lease_)) {
      member_lease_ = ctx_.keys.grant_lease(id_, ctx_.config.ttl_ms);
      ctx_.keys.put(paths::member(id_), encode_u64_value(id_), member_lease_);
    }
    if (leading_ && !ctx_.keys.renew_leader(id_, core_.term())) {
      ctx_.log("node " + std::to_string(id_) + " lost leadership");
      step_down();
      arm_election();
    }
  });
  ctx_.loop.schedule_after(ctx_.config.heartbeat_ms, [this, ep] { renew(ep); });
}

void Node::crash() {
  up_ = false;
  leading_ = false;
  ++epoch_;
  ctx_.fabric.set_up(id_, false);
  ctx_.keys.cancel_watches(id_);
}

void Node::restart() {
  if (up_) return;
  up_ = true;
  healthy_ = true;
  ++epoch_;
  lb_.reset();
  fb_.reset();
  leader_.reset();
  tree_.discard_staging();
  core_.restart();
  ctx_.fabric.set_up(id_, true);
  start();
  guarded([&] { catch_up(); });
}

void Node::arm_election() {
  const auto gen = ++election_gen_;
  const auto ep = epoch_;
  const auto delay = ctx_.rng.between(ctx_.config.election.timeout_min_ms, ctx_.config.election.timeout_max_ms);
  ctx_.loop.schedule_after(delay, [this, gen, ep] {
    if (ep != epoch_ || gen != election_gen_) return;
    guarded([&] {
      if (leading_) return;
      if (const auto cur = coord_call([&] { return ctx_.keys.leader(); }); cur && cur->node != id_) {
        core_.accept_leader(cur->node, cur->term);
        leader_ = cur->node;
        return;
      }
      const auto sender = [this](NodeId to, MessageKind k, Bytes p) { send(to, k, std::move(p)); };
      if (core_.start_election(sender)) {
        become_leader();
      } else {
        arm_election();
      }
    });
  });
}

void Node::on_leader_event(const coord::WatchEvent& ev) {
  if (ev.new_value) {
    const auto rec = coord::decode_leader(*ev.new_value);
    leader_ = rec.node;
    if (rec.node != id_) {
      ++election_gen_;
      if (leading_) step_down();
      core_.accept_leader(rec.node, rec.term);
    }
    return;
  }
  // Leader key gone: its lease expired or was revoked.
  leader_.reset();
  if (leading_) step_down();
  if (fb_) ctx_.log("node " + std::to_string(id_) + " abandons block " + std::to_string(fb_->height));
  fb_.reset();
  tree_.discard_staging();
  arm_election();
}

void Node::become_leader() {
  const auto lease = coord_call([&] { return ctx_.keys.grant_lease(id_, ctx_.config.ttl_ms); });
  if (!coord_call([&] { return ctx_.keys.campaign(id_, core_.term(), lease); })) {
    ctx_.keys.revoke(lease);
    core_.restart();
    if (const auto cur = ctx_.keys.leader(); cur && cur->node != id_) {
      core_.accept_leader(cur->node, cur->term);
      leader_ = cur->node;
    } else {
      arm_election();
    }
    return;
  }
  leader_lease_ = lease;
  leading_ = true;
  leader_ = id_;
  ++election_gen_;
  ctx_.leaders.emplace_back(id_, core_.term());
  ctx_.log("node " + std::to_string(id_) + " leads term " + std::to_string(core_.term()));
  fb_.reset();
  tree_.discard_staging();
  catch_up();
  const auto ep = epoch_;
  ctx_.loop.schedule_after(0, [this, ep] {
    if (ep == epoch_) guarded([&] { lead_next(); });
  });
}

void Node::step_down() {
  if (leading_ && leader_lease_ != 0) ctx_.keys.revoke(leader_lease_);
  leader_lease_ = 0;
  leading_ = false;
  lb_.reset();
  fb_.reset();
  tree_.discard_staging();
  core_.restart();
}

void Node::catch_up() {
  const auto rec = coord_call([&] { return ctx_.keys.get(std::string(paths::kCommitted)); });
  if (!rec) return;
  const auto committed = decode_committed(*rec);
  while (height_ < committed.height) {
    const auto bytes = coord_call([&] { return ctx_.keys.get(paths::chain(height_ + 1)); });
    if (!bytes) break;
    const Block block = decode_block(*bytes);
    const auto report = sched::execute_serial(block, CommittedView(tree_));
    commit_local(block, report.delta);
  }
}

void Node::commit_local(const Block& block, const StateDelta& delta) {
  tree_.staging().clear();
  tree_.staging().stage(delta);
  const Digest root = tree_.parallel_insert_from_map(ctx_.config.scheduler_threads);
  if (root != block.state_root) {
    ++ctx_.divergences;
    ctx_.log("node " + std::to_string(id_) + " diverged at height " + std::to_string(block.height));
  }
  height_ = block.height;
  last_hash_ = block_hash(block, ctx_.config.tree.hash);
}

std::vector<NodeId> Node::live_members() {
  const auto keys = coord_call([&] { return ctx_.keys.list(std::string(paths::kMembers)); });
  std::vector<NodeId> out;
  for (const auto& [path, value] : keys) {
    if (auto id = trailing_id(path)) out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- leader

void Node::lead_next() {
  if (!leading_ || lb_ || ctx_.halted || ctx_.finished) return;
  if (height_ >= ctx_.inputs.size()) {
    ctx_.finished = true;
    return;
  }
  start_block();
}

void Node::start_block() {
  lb_.emplace();
  LeaderBlock& lb = *lb_;
  lb.height = height_ + 1;
  lb.started = Clock::now();
  coord_ms_ = 0;
  ctx_.exec_wall_ms.erase(lb.height);
  marker("production");

  phase(&PhaseTimings::production_ms, [&] {
    bool have = false;
    if (const auto pending = coord_call([&] { return ctx_.keys.get(std::string(paths::kPending)); })) {
      auto [validation, block] = decode_pending(*pending);
      if (block.height == lb.height) {
        lb.validation = validation;
        lb.block = std::move(block);
        have = true;
        ctx_.log("node " + std::to_string(id_) + " re-executes pending block " + std::to_string(lb.height));
      }
    }
    if (!have) {
      const BlockInput& in = ctx_.inputs[lb.height - 1];
      if (in.validate) {
        lb.validation = true;
        lb.block = *in.validate;
      } else if (in.txs.empty()) {
        lb.block.height = lb.height;
        lb.block.parent_hash = last_hash_;
        lb.block.producer_id = id_;
      } else {
        lb.block = produce_block(ctx_.pool, in.txs.size(), lb.height, last_hash_, id_, ctx_.verifier, &lb.dropped);
      }
      coord_call([&] { ctx_.keys.put(std::string(paths::kPending), encode_pending(lb.validation, lb.block)); });
    }
  });

  const auto live = live_members();
  if (live.size() < ctx_.quorum()) {
    halt("quorum lost: " + std::to_string(live.size()) + " live of " + std::to_string(ctx_.members.size()));
    return;
  }

  marker("dag");
  phase(&PhaseTimings::detection_ms, [&] {
    const auto g = dag::build_graph(lb.block.txs, ctx_.config.dag_threads);
    lb.comps = dag::connected_components(g);
  });

  marker("assign");
  phase(&PhaseTimings::assign_ms, [&] {
    for (NodeId n : live) {
      if (n != id_ || ctx_.config.leader_executes || ctx_.members.size() == 1) lb.executors.push_back(n);
    }
    if (lb.executors.empty()) lb.executors.push_back(id_);
    lb.assignment = assign_followers(lb.comps, lb.executors);
    ComponentAssign msg{lb.height, lb.assignment.version, {lb.assignment.owner.begin(), lb.assignment.owner.end()}};
    const Bytes assign_bytes = encode(msg);
    coord_call([&] { ctx_.keys.put(paths::assign(lb.height), assign_bytes); });
    const Bytes announce = encode(BlockAnnounce{lb.height, lb.validation, canonical_encode(lb.block), lb.comps.components});
    const Bytes start = encode(Control{lb.height, ControlKind::kStart, {}});
    for (NodeId e : lb.executors) {
      send(e, MessageKind::kBlockAnnounce, announce);
      send(e, MessageKind::kComponentAssign, assign_bytes);
      send(e, MessageKind::kControl, start);
    }
  });

  marker("execution");
  check_progress();
}

void Node::on_member_event(const coord::WatchEvent& ev) {
  if (!leading_ || ev.new_value) return;
  const auto gone = trailing_id(ev.path);
  if (!gone || *gone == id_) return;
  ctx_.log("member " + std::to_string(*gone) + " expired");
  if (!lb_) return;
  LeaderBlock& lb = *lb_;
  // A delta that arrived before the crash is kept.
  lb.failed.insert(*gone);
  const auto live = live_members();
  if (live.size() < ctx_.quorum()) {
    halt("quorum lost: " + std::to_string(live.size()) + " live of " + std::to_string(ctx_.members.size()));
    return;
  }
  std::set<ComponentId> covered;
  for (const auto& [n, ship] : lb.deltas) covered.insert(ship.components.begin(), ship.components.end());
  bool orphaned = false;
  for (const auto& [c, owner] : lb.assignment.owner) {
    if (owner == *gone && !covered.contains(c)) orphaned = true;
  }
  if (!orphaned) return;

  std::vector<NodeId> targets;
  for (NodeId e : lb.executors) {
    if (!lb.failed.contains(e) && std::binary_search(live.begin(), live.end(), e)) targets.push_back(e);
  }
  if (targets.empty()) {
    for (NodeId n : live) {
      if (n != id_) targets.push_back(n);
    }
  }
  if (targets.empty()) targets.push_back(id_);

  const Assignment before = lb.assignment;
  lb.assignment = reassign_on_crash(before, lb.comps, *gone, targets, covered);
  ++ctx_.reassignments;
  for (const auto& [c, owner] : lb.assignment.owner) {
    if (before.owner.at(c) != owner) {
      lb.done.erase(c);
      ctx_.log("reassign v" + std::to_string(lb.assignment.version) + " component " + std::to_string(c) + " " +
               std::to_string(*gone) + "->" + std::to_string(owner));
    }
  }
  ComponentAssign msg{lb.height, lb.assignment.version, {lb.assignment.owner.begin(), lb.assignment.owner.end()}};
  const Bytes assign_bytes = encode(msg);
  coord_call([&] { ctx_.keys.put(paths::assign(lb.height), assign_bytes); });
  for (NodeId t : targets) {
    if (std::find(lb.executors.begin(), lb.executors.end(), t) == lb.executors.end()) {
      lb.executors.push_back(t);
      send(t, MessageKind::kBlockAnnounce,
           encode(BlockAnnounce{lb.height, lb.validation, canonical_encode(lb.block), lb.comps.components}));
      send(t, MessageKind::kComponentAssign, assign_bytes);
      send(t, MessageKind::kControl, encode(Control{lb.height, ControlKind::kStart, {}}));
      if (lb.finish_sent) send(t, MessageKind::kControl, encode(Control{lb.height, ControlKind::kFinish, {}}));
    } else {
      send(t, MessageKind::kComponentAssign, assign_bytes);
    }
  }
  check_progress();
}

void Node::on_done(const coord::Message& m) {
  if (!leading_ || !lb_) return;
  const auto d = decode_done(m.payload);
  LeaderBlock& lb = *lb_;
  if (d.height != lb.height || lb.failed.contains(m.from)) return;
  const auto it = lb.assignment.owner.find(d.component);
  if (it == lb.assignment.owner.end() || it->second != m.from) return;
  lb.done.insert(d.component);
  check_progress();
}

void Node::on_follower_delta(const StateDeltaShip& ship) {
  if (!leading_ || !lb_ || ship.merged) return;
  LeaderBlock& lb = *lb_;
  if (ship.height != lb.height || lb.failed.contains(ship.from)) return;
  lb.deltas[ship.from] = ship;
  check_progress();
}

void Node::on_state_event(const coord::WatchEvent& ev) {
  if (!ev.new_value || ctx_.config.transport != Transport::kStore) return;
  const auto ship = decode_ship(*ev.new_value);
  if (ship.merged) {
    on_merged(ship);
  } else {
    on_follower_delta(ship);
  }
}

void Node::check_progress() {
  if (!lb_) return;
  LeaderBlock& lb = *lb_;
  if (!lb.finish_sent && lb.done.size() == lb.comps.count()) {
    lb.finish_sent = true;
    const Bytes finish = encode(Control{lb.height, ControlKind::kFinish, {}});
    for (NodeId e : lb.executors) {
      if (!lb.failed.contains(e)) send(e, MessageKind::kControl, finish);
    }
  }
  if (!lb.finish_sent) return;
  std::set<ComponentId> covered;
  for (const auto& [n, ship] : lb.deltas) covered.insert(ship.components.begin(), ship.components.end());
  if (covered.size() == lb.comps.count()) merge_and_commit();
}

void Node::merge_and_commit() {
  LeaderBlock& lb = *lb_;
  StateDelta merged;
  phase(&PhaseTimings::state_ms, [&] {
    for (const auto& [n, ship] : lb.deltas) merged.merge(decode_delta(ship.delta));
    std::vector<ComponentId> all(lb.comps.count());
    for (ComponentId c = 0; c < all.size(); ++c) all[c] = c;
    const Bytes out = encode(StateDeltaShip{lb.height, id_, true, std::move(all), encode_delta(merged)});
    if (ctx_.config.transport == Transport::kMsg) {
      for (NodeId n : live_members()) {
        if (n == id_) continue;
        send(n, MessageKind::kStateDeltaShip, out);
        ctx_.state_bytes += out.size();
      }
    } else {
      coord_call([&] { ctx_.keys.put(paths::merged(lb.height), out); });
      ctx_.state_bytes += out.size();
    }
    tree_.staging().clear();
    tree_.staging().stage(merged);
  });
  for (const auto& [n, wall] : ctx_.exec_wall_ms[lb.height]) {
    lb.timings.execution_ms = std::max(lb.timings.execution_ms, wall);
  }

  merkle::PreparedCommit prepared;
  phase(&PhaseTimings::state_ms, [&] { prepared = tree_.prepare(ctx_.config.scheduler_threads); });

  if (lb.validation && prepared.root != lb.block.state_root) {
    ctx_.log("validation mismatch at height " + std::to_string(lb.height));
    tree_.discard_staging();
    BlockOutcome out;
    out.height = lb.height;
    out.block_hash = block_hash(lb.block, ctx_.config.tree.hash);
    out.root = prepared.root;
    out.status = BlockStatus::kValidationMismatch;
    out.block = lb.block;
    out.leader = id_;
    out.components = lb.comps.count();
    ctx_.outcomes[lb.height] = std::move(out);
    const Bytes h = encode(Halt{lb.height, "validation mismatch"});
    for (NodeId n : live_members()) {
      if (n != id_) send(n, MessageKind::kHalt, h);
    }
    coord_call([&] { ctx_.keys.del(std::string(paths::kPending)); });
    ctx_.finished = true;
    lb_.reset();
    return;
  }

  marker("commit");
  Digest root{};
  phase(&PhaseTimings::state_ms, [&] { root = tree_.commit(std::move(prepared)); });
  if (!lb.validation) lb.block.state_root = root;
  const Digest hash = block_hash(lb.block, ctx_.config.tree.hash);

  coord_call([&] {
    ctx_.keys.put(paths::chain(lb.height), canonical_encode(lb.block));
    ctx_.keys.put(std::string(paths::kCommitted), encode_committed({lb.height, root, hash}));
    ctx_.keys.del(std::string(paths::kPending));
    ctx_.keys.del(paths::assign(lb.height));
    for (const auto& [path, v] : ctx_.keys.list(paths::state_prefix(lb.height))) ctx_.keys.del(path);
  });
  const Bytes commit = encode(Control{lb.height, ControlKind::kCommit, root});
  for (NodeId n : live_members()) {
    if (n != id_) send(n, MessageKind::kControl, commit);
  }
  height_ = lb.height;
  last_hash_ = hash;
  lb.timings.coordination_ms = coord_ms_;
  lb.timings.total_ms = ms_since(lb.started);
  ctx_.log("commit height " + std::to_string(lb.height) + " root " + to_hex(root).substr(0, 16));

  BlockOutcome out;
  out.height = lb.height;
  out.block_hash = hash;
  out.root = root;
  out.status = BlockStatus::kCommitted;
  out.timings = lb.timings;
  out.block = lb.block;
  out.dropped = lb.dropped;
  out.components = lb.comps.count();
  out.leader = id_;
  ctx_.outcomes[lb.height] = std::move(out);
  lb_.reset();
  fb_.reset();
  const auto ep = epoch_;
  ctx_.loop.schedule_after(0, [this, ep] {
    if (ep == epoch_) guarded([&] { lead_next(); });
  });
}

void Node::halt(const std::string& reason) {
  ctx_.log("halt: " + reason);
  ctx_.halted = true;
  ctx_.halt_reason = reason;
  const std::uint64_t h = lb_ ? lb_->height : height_ + 1;
  BlockOutcome out;
  out.height = h;
  out.status = BlockStatus::kHalted;
  out.leader = id_;
  if (lb_) {
    out.block = lb_->block;
    out.timings = lb_->timings;
    out.components = lb_->comps.count();
  }
  ctx_.outcomes[h] = std::move(out);
  tree_.discard_staging();
  const Bytes msg = encode(Halt{h, reason});
  for (NodeId n : ctx_.members) {
    if (n != id_) send(n, MessageKind::kHalt, msg);
  }
  lb_.reset();
  fb_.reset();
}

// -------------------------------------------------------------- follower

void Node::on_message(const coord::Message& m) {
  guarded([&] {
    switch (m.kind) {
      case MessageKind::kRequestVote:
      case MessageKind::kVote:
      case MessageKind::kHeartbeat: {
        const auto sender = [this](NodeId to, MessageKind k, Bytes p) { send(to, k, std::move(p)); };
        const bool was_leading = leading_;
        if (core_.on_message(m, sender) && !was_leading) {
          become_leader();
        } else if (was_leading && core_.role() != coord::Role::kLeader) {
          step_down();
        } else if (m.kind == MessageKind::kRequestVote && core_.voted_for() == m.from && !leader_) {
          arm_election();
        }
        return;
      }
      case MessageKind::kComponentDone:
        on_done(m);
        return;
      case MessageKind::kStateDeltaShip: {
        const auto ship = decode_ship(m.payload);
        if (ship.merged) {
          if (leader_ == m.from) on_merged(ship);
        } else {
          on_follower_delta(ship);
        }
        return;
      }
      default:
        break;
    }
    if (leader_ != m.from) return;
    switch (m.kind) {
      case MessageKind::kBlockAnnounce:
        on_announce(m);
        return;
      case MessageKind::kComponentAssign:
        on_assign(decode_assign(m.payload));
        return;
      case MessageKind::kControl:
        on_control(m);
        return;
      case MessageKind::kHalt:
        if (!leading_) {
          fb_.reset();
          tree_.discard_staging();
        }
        return;
      default:
        return;
    }
  });
}

void Node::on_announce(const coord::Message& m) {
  auto ann = decode_announce(m.payload);
  if (ann.height <= height_) return;
  if (ann.height > height_ + 1) catch_up();
  if (ann.height != height_ + 1) return;
  FollowerBlock fb;
  fb.height = ann.height;
  fb.leader = m.from;
  fb.block = decode_block(ann.block);
  fb.graph = dag::build_graph(fb.block.txs, ctx_.config.dag_threads);
  fb.comps = components_from_lists(std::move(ann.components), fb.block.txs.size());
  fb_ = std::move(fb);
  if (!leading_) tree_.discard_staging();
}

void Node::on_assign(const ComponentAssign& a) {
  if (!fb_ || a.height != fb_->height || a.version + 1 <= fb_->version) return;
  fb_->version = a.version + 1;
  fb_->assigned.clear();
  for (const auto& [c, owner] : a.owners) {
    if (c >= fb_->comps.count()) throw DecodeError("assignment names an unknown component");
    if (owner == id_) fb_->assigned.insert(c);
  }
  if (fb_->started) run_assigned();
}

void Node::on_control(const coord::Message& m) {
  const auto ctl = decode_control(m.payload);
  switch (ctl.kind) {
    case ControlKind::kStart:
      if (fb_ && fb_->height == ctl.height) {
        fb_->started = true;
        run_assigned();
      }
      return;
    case ControlKind::kFinish:
      if (fb_ && fb_->height == ctl.height) {
        fb_->finished = true;
        run_assigned();
      }
      return;
    case ControlKind::kCommit: {
      if (leading_ || ctl.height <= height_) return;
      if (fb_ && fb_->height == ctl.height && fb_->merged) {
        auto prepared = tree_.prepare(ctx_.config.scheduler_threads);
        if (prepared.root != ctl.root) {
          ++ctx_.divergences;
          ctx_.log("node " + std::to_string(id_) + " computed a different root at height " +
                   std::to_string(ctl.height));
          tree_.discard_staging();
          fb_.reset();
          return;
        }
        tree_.commit(std::move(prepared));
        Block committed = fb_->block;
        committed.state_root = ctl.root;
        height_ = ctl.height;
        last_hash_ = block_hash(committed, ctx_.config.tree.hash);
        fb_.reset();
        return;
      }
      fb_.reset();
      tree_.discard_staging();
      catch_up();
      return;
    }
  }
}

void Node::on_merged(const StateDeltaShip& ship) {
  if (leading_ || !fb_ || ship.height != fb_->height) return;
  tree_.staging().clear();
  tree_.staging().stage(decode_delta(ship.delta));
  fb_->merged = true;
}

void Node::run_assigned() {
  FollowerBlock& fb = *fb_;
  std::set<ComponentId> todo;
  for (ComponentId c : fb.assigned) {
    if (!fb.executed.contains(c) && !fb.running.contains(c)) todo.insert(c);
  }
  if (todo.empty()) {
    if (fb.finished && fb.running.empty()) ship_delta();
    return;
  }
  const auto t0 = Clock::now();
  auto report = sched::execute_components(fb.block, fb.graph, fb.comps, todo, CommittedView(tree_),
                                          ctx_.config.scheduler_threads);
  ctx_.exec_wall_ms[fb.height][id_] += ms_since(t0);
  fb.delta.merge(report.delta);
  std::size_t txs = 0;
  for (ComponentId c : todo) {
    txs += fb.comps.size_of(c);
    fb.running.insert(c);
  }
  const auto delay = std::max<coord::SimTime>(
      1, static_cast<coord::SimTime>(std::ceil(static_cast<double>(txs * ctx_.config.exec_cost_us) / 1000.0)));
  const auto ep = epoch_;
  const auto h = fb.height;
  ctx_.loop.schedule_after(delay, [this, ep, h, todo] {
    if (ep != epoch_) return;
    guarded([&] {
      if (!fb_ || fb_->height != h) return;
      for (ComponentId c : todo) {
        fb_->running.erase(c);
        fb_->executed.insert(c);
        send(fb_->leader, MessageKind::kComponentDone, encode(ComponentDone{h, c}));
      }
      if (fb_->finished) run_assigned();
    });
  });
}

void Node::ship_delta() {
  FollowerBlock& fb = *fb_;
  StateDeltaShip ship{fb.height, id_, false, {fb.executed.begin(), fb.executed.end()}, encode_delta(fb.delta)};
  const Bytes bytes = encode(ship);
  ctx_.state_bytes += bytes.size();
  if (ctx_.config.transport == Transport::kMsg) {
    send(fb.leader, MessageKind::kStateDeltaShip, bytes);
  } else {
    coord_call([&] { ctx_.keys.put(paths::state(fb.height, id_), bytes); });
  }
}

}  // namespace ibex::cluster
