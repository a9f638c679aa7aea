// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include "ibex/coord/event_loop.hpp"
#include "ibex/coord/fabric.hpp"
#include "ibex/coord/fault_plan.hpp"
#include "ibex/coord/keyspace.hpp"

namespace ibex::coord {
namespace {

TEST(EventLoop, OrdersByTimeThenScheduling) {
  EventLoop loop;
  std::vector<int> seen;
  loop.schedule_at(5, [&] { seen.push_back(2); });
  loop.schedule_at(1, [&] { seen.push_back(0); });
  loop.schedule_at(5, [&] { seen.push_back(3); });
  loop.schedule_at(1, [&] {
    seen.push_back(1);
    loop.schedule_after(0, [&] { seen.push_back(10); });
  });
  loop.run_until(4);
  EXPECT_EQ(loop.now(), 4);
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 10}));
  loop.run_until(100);
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 10, 2, 3}));
  EXPECT_EQ(loop.executed(), 5u);
  EXPECT_FALSE(loop.step());
}

TEST(EventLoop, RunUntilPredicate) {
  EventLoop loop;
  int n = 0;
  for (int i = 1; i <= 10; ++i) loop.schedule_at(i * 10, [&] { ++n; });
  EXPECT_TRUE(loop.run_until([&] { return n == 3; }, 1000));
  EXPECT_EQ(loop.now(), 30);
  EXPECT_FALSE(loop.run_until([&] { return n == 100; }, 55));
  EXPECT_EQ(n, 5);
}

TEST(Fabric, LinksAreFifoAndDelaysBounded) {
  EventLoop loop;
  Fabric f(loop, {2, 9, 0.0, 4, false});
  std::vector<std::pair<SimTime, std::uint8_t>> got;
  f.attach(1, [](const Message&) {});
  f.attach(2, [&](const Message& m) { got.emplace_back(loop.now(), m.payload[0]); });
  f.set_up(1, true);
  f.set_up(2, true);
  for (std::uint8_t i = 0; i < 50; ++i) f.send({1, 2, MessageKind::kHeartbeat, Bytes{i}});
  loop.run_until(1000);
  ASSERT_EQ(got.size(), 50u);
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].second, i);
    EXPECT_GE(got[i].first, 2);
    if (i > 0) {
      EXPECT_GE(got[i].first, got[i - 1].first);
    }
  }
  EXPECT_EQ(f.delivered_bytes(MessageKind::kHeartbeat), 50u);
  EXPECT_EQ(f.delivered_bytes(MessageKind::kVote), 0u);
}

TEST(Fabric, DropsAndDownNodes) {
  EventLoop loop;
  Fabric f(loop, {1, 1, 0.5, 9, true});
  int got = 0;
  f.attach(1, [](const Message&) {});
  f.attach(2, [&](const Message&) { ++got; });
  f.set_up(1, true);
  f.set_up(2, true);
  for (int i = 0; i < 1000; ++i) f.send({1, 2, MessageKind::kVote, {}});
  loop.run_until(10);
  EXPECT_GT(got, 350);
  EXPECT_LT(got, 650);
  EXPECT_EQ(f.delivered() + f.dropped(), 1000u);
  EXPECT_EQ(f.trace().size(), static_cast<std::size_t>(got));

  Fabric g(loop, FabricOptions::direct());
  int got2 = 0;
  g.attach(1, [](const Message&) {});
  g.attach(2, [&](const Message&) { ++got2; });
  g.set_up(1, true);
  g.set_up(2, true);
  g.send({1, 2, MessageKind::kVote, {}});
  g.set_up(2, false);
  loop.run_until(20);
  EXPECT_EQ(got2, 0);
  EXPECT_EQ(g.dropped(), 1u);
}

TEST(KeySpace, PutGetDelList) {
  EventLoop loop;
  KeySpace ks(loop);
  ks.put("/a/1", Bytes{1});
  ks.put("/a/2", Bytes{2});
  ks.put("/b", Bytes{3});
  EXPECT_EQ(ks.get("/a/1"), Bytes{1});
  EXPECT_EQ(ks.list("/a/").size(), 2u);
  EXPECT_TRUE(ks.del("/a/1"));
  EXPECT_FALSE(ks.del("/a/1"));
  EXPECT_FALSE(ks.get("/a/1").has_value());
}

TEST(KeySpace, WatchDeliversInOrderOncePerChange) {
  EventLoop loop;
  KeySpace ks(loop);
  std::vector<WatchEvent> events;
  ks.watch(7, "/k", [&](const WatchEvent& e) { events.push_back(e); });
  ks.put("/k", Bytes{0});
  loop.run_until(0);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_FALSE(events[0].old_value.has_value());
  for (std::uint8_t i = 1; i <= 100; ++i) ks.put("/k", Bytes{i});
  loop.run_until(0);
  ASSERT_EQ(events.size(), 101u);
  for (std::size_t i = 1; i < events.size(); ++i) {
    EXPECT_EQ((*events[i].new_value)[0], i);
    EXPECT_EQ((*events[i].old_value)[0], i - 1);
    EXPECT_GT(events[i].revision, events[i - 1].revision);
  }
  ks.put("/other", Bytes{1});
  ks.cancel_watches(7);
  ks.put("/k", Bytes{9});
  loop.run_until(1);
  EXPECT_EQ(events.size(), 101u);
}

TEST(KeySpace, LeaseLivenessBoundary) {
  Lease l{1, 1, 100, 50};
  EXPECT_TRUE(l.live(149));
  EXPECT_FALSE(l.live(150));
}

TEST(KeySpace, RenewedLeasePersistsExpiredLeaseDeletesKeys) {
  EventLoop loop;
  KeySpace ks(loop);
  const LeaseId lease = ks.grant_lease(1, 300);
  ks.put("/members/1", Bytes{1}, lease);
  for (int tick = 0; tick < 100; ++tick) {
    loop.run_until(loop.now() + 100);
    ASSERT_TRUE(ks.keep_alive(lease));
    ASSERT_TRUE(ks.get("/members/1").has_value());
  }
  int deletions = 0;
  ks.watch(2, "/members/", [&](const WatchEvent& e) {
    if (!e.new_value) ++deletions;
  });
  const SimTime stopped = loop.now();
  loop.run_until(stopped + 299);
  EXPECT_TRUE(ks.get("/members/1").has_value());
  loop.run_until(stopped + 300);
  EXPECT_FALSE(ks.get("/members/1").has_value());
  EXPECT_EQ(deletions, 1);
  EXPECT_FALSE(ks.keep_alive(lease));
  loop.run_until(stopped + 5000);
  EXPECT_EQ(deletions, 1);
}

TEST(KeySpace, LeaderKeyTermFencing) {
  EventLoop loop;
  KeySpace ks(loop);
  const LeaseId l1 = ks.grant_lease(1, 1000);
  ASSERT_TRUE(ks.campaign(1, 1, l1));
  const LeaseId l2 = ks.grant_lease(2, 1000);
  EXPECT_FALSE(ks.campaign(2, 2, l2));  // held by node 1
  EXPECT_FALSE(ks.campaign(2, 2, l1));  // not node 2's lease
  EXPECT_TRUE(ks.renew_leader(1, 1));
  ks.revoke(l1);
  EXPECT_FALSE(ks.leader().has_value());
  ASSERT_TRUE(ks.campaign(2, 2, l2));
  EXPECT_EQ(ks.leader()->node, 2u);
  EXPECT_EQ(ks.leader()->term, 2u);
  // The stale ex-leader cannot renew or re-campaign with its old term.
  EXPECT_FALSE(ks.renew_leader(1, 1));
  const LeaseId l3 = ks.grant_lease(1, 1000);
  EXPECT_FALSE(ks.campaign(1, 1, l3));
  EXPECT_EQ(ks.highest_term(), 2u);
  const auto rec = decode_leader(encode_leader({5, 6, 7}));
  EXPECT_EQ(rec.node, 5u);
  EXPECT_EQ(rec.term, 6u);
  EXPECT_EQ(rec.lease, 7u);
}

TEST(KeySpace, LeaderCrashExpiresKeyAndNotifiesOnce) {
  EventLoop loop;
  KeySpace ks(loop);
  const LeaseId l = ks.grant_lease(1, 1000);
  ASSERT_TRUE(ks.campaign(1, 1, l));
  int notified = 0;
  SimTime at = -1;
  ks.watch(2, std::string(kLeaderKey), [&](const WatchEvent& e) {
    if (!e.new_value) {
      ++notified;
      at = loop.now();
    }
  });
  // Renew every ttl/3, then crash at t=1000.
  for (SimTime t = 333; t <= 1000; t += 333) {
    loop.run_until(t);
    ASSERT_TRUE(ks.renew_leader(1, 1));
  }
  const SimTime crash = loop.now();
  loop.run_until(crash + 5000);
  EXPECT_EQ(notified, 1);
  EXPECT_LE(at - crash, 1000);
}

TEST(KeySpace, UnavailableStoreThrows) {
  EventLoop loop;
  KeySpace ks(loop);
  ks.set_available(false);
  EXPECT_THROW(ks.put("/x", {}), CoordinationUnavailable);
  EXPECT_THROW(ks.get("/x"), CoordinationUnavailable);
  EXPECT_THROW(ks.grant_lease(1, 10), CoordinationUnavailable);
  ks.set_available(true);
  EXPECT_NO_THROW(ks.put("/x", {}));
  EXPECT_THROW(ks.put("/y", {}, LeaseId{99}), std::invalid_argument);
}

TEST(FaultPlan, ParseAndRoundTrip) {
  const auto plan = FaultPlan::parse_string(
      "# comment\n"
      "crash follower at execution@1\n"
      "crash leader at phase3-mid\n"
      "crash 3 at +250\n"
      "restart 3 at +900\n");
  ASSERT_EQ(plan.events.size(), 4u);
  EXPECT_EQ(plan.events[0].target.kind, FaultTarget::Kind::kFollower);
  EXPECT_EQ(plan.events[0].phase, "execution");
  EXPECT_EQ(plan.events[0].height, 1u);
  EXPECT_EQ(plan.events[2].after_ms, 250);
  EXPECT_EQ(plan.events[3].action, FaultAction::kRestart);
  EXPECT_EQ(FaultPlan::parse_string(plan.to_text()).events, plan.events);
}

TEST(FaultPlan, Rejections) {
  EXPECT_THROW(FaultPlan::parse_string("crash 1 at lunch\n"), FaultPlanError);
  EXPECT_THROW(FaultPlan::parse_string("explode 1 at +5\n"), FaultPlanError);
  EXPECT_THROW(FaultPlan::parse_string("crash 1 +5\n"), FaultPlanError);
  EXPECT_THROW(FaultPlan::parse_string("restart leader at +5\n"), FaultPlanError);
  EXPECT_THROW(FaultPlan::parse_string("crash x at +5\n"), FaultPlanError);
  EXPECT_THROW(FaultPlan::parse_string("crash 9 at +5\n").validate({1, 2, 3}), FaultPlanError);
  EXPECT_TRUE(FaultPlan::parse_string("\n# only comments\n").empty());
}

TEST(FaultInjector, TimedAndPhaseTriggers) {
  EventLoop loop;
  std::set<NodeId> down;
  FaultInjector::Hooks hooks;
  hooks.crash = [&](NodeId n) { down.insert(n); };
  hooks.restart = [&](NodeId n) { down.erase(n); };
  hooks.leader = [] { return std::optional<NodeId>(1); };
  hooks.live_followers = [&] {
    std::vector<NodeId> out;
    for (NodeId n : {2, 3, 4})
      if (!down.contains(n)) out.push_back(n);
    return out;
  };
  FaultInjector inj(loop,
                    FaultPlan::parse_string("crash 4 at +100\nrestart 4 at +200\n"
                                            "crash follower at execution\ncrash follower at execution\n"
                                            "crash leader at commit@2\n"),
                    {1, 2, 3, 4}, hooks);
  inj.arm();
  loop.run_until(150);
  EXPECT_TRUE(down.contains(4));
  loop.run_until(250);
  EXPECT_FALSE(down.contains(4));
  inj.on_phase("execution", 1);
  EXPECT_EQ(down, (std::set<NodeId>{2, 3}));
  inj.on_phase("commit", 1);
  EXPECT_FALSE(down.contains(1));
  inj.on_phase("commit", 2);
  EXPECT_TRUE(down.contains(1));
  inj.on_phase("commit", 2);
  EXPECT_EQ(inj.fired(), 5u);
  EXPECT_EQ(inj.log().front(), "t=100 crash 4");
}

TEST(FaultInjector, EmptyPlanDoesNothing) {
  EventLoop loop;
  int crashes = 0;
  FaultInjector::Hooks hooks;
  hooks.crash = [&](NodeId) { ++crashes; };
  FaultInjector inj(loop, {}, {1, 2, 3}, hooks);
  inj.arm();
  for (auto p : fault_phases()) inj.on_phase(p, 1);
  loop.run_until(1000);
  EXPECT_EQ(crashes, 0);
  EXPECT_EQ(loop.executed(), 0u);
}

}  // namespace
}  // namespace ibex::coord
