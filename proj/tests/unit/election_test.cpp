// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <deque>

#include "ibex/coord/election.hpp"

namespace ibex::coord {
namespace {

// Delivers messages by hand between cores, in send order.
struct Wire {
  std::deque<Message> queue;
  ElectionCore::Send from(NodeId self) {
    return [this, self](NodeId to, MessageKind kind, Bytes payload) {
      queue.push_back({self, to, kind, std::move(payload)});
    };
  }
};

TEST(ElectionMessages, RoundTrip) {
  EXPECT_EQ(decode_request_vote(encode(RequestVoteMsg{4, 2})).candidate, 2u);
  const auto v = decode_vote(encode(VoteMsg{9, true}));
  EXPECT_EQ(v.term, 9u);
  EXPECT_TRUE(v.granted);
  EXPECT_EQ(decode_heartbeat(encode(HeartbeatMsg{3, 1})).leader, 1u);
  EXPECT_THROW(decode_vote(Bytes(5, 0)), DecodeError);
}

TEST(ElectionCore, SingleMemberWinsAlone) {
  ElectionCore c(1, {1});
  Wire w;
  EXPECT_TRUE(c.start_election(w.from(1)));
  EXPECT_EQ(c.role(), Role::kLeader);
  EXPECT_TRUE(w.queue.empty());
}

TEST(ElectionCore, OneVotePerTermFirstComeFirstServed) {
  ElectionCore voter(3, {1, 2, 3});
  Wire w;
  const auto send = w.from(3);
  voter.on_message({1, 3, MessageKind::kRequestVote, encode(RequestVoteMsg{1, 1})}, send);
  voter.on_message({2, 3, MessageKind::kRequestVote, encode(RequestVoteMsg{1, 2})}, send);
  ASSERT_EQ(w.queue.size(), 2u);
  EXPECT_TRUE(decode_vote(w.queue[0].payload).granted);
  EXPECT_FALSE(decode_vote(w.queue[1].payload).granted);
  EXPECT_EQ(voter.voted_for(), 1u);
  // A higher term resets the vote.
  voter.on_message({2, 3, MessageKind::kRequestVote, encode(RequestVoteMsg{2, 2})}, send);
  EXPECT_TRUE(decode_vote(w.queue[2].payload).granted);
}

TEST(ElectionCore, StaleHeartbeatDeposesOldLeader) {
  ElectionCore old_leader(1, {1, 2, 3});
  ElectionCore ahead(2, {1, 2, 3});
  Wire w;
  ASSERT_FALSE(old_leader.start_election(w.from(1)));
  old_leader.on_message({2, 1, MessageKind::kVote, encode(VoteMsg{1, true})}, w.from(1));
  ASSERT_EQ(old_leader.role(), Role::kLeader);
  ahead.observe_term(3);
  w.queue.clear();
  ahead.on_message({1, 2, MessageKind::kHeartbeat, encode(HeartbeatMsg{1, 1})}, w.from(2));
  EXPECT_FALSE(ahead.leader().has_value());
  ASSERT_EQ(w.queue.size(), 1u);
  EXPECT_EQ(w.queue[0].kind, MessageKind::kVote);
  old_leader.on_message(w.queue[0], w.from(1));
  EXPECT_EQ(old_leader.role(), Role::kFollower);
  EXPECT_EQ(old_leader.term(), 3u);
}

TEST(ElectionCore, MajorityOfThree) {
  std::map<NodeId, ElectionCore> nodes;
  for (NodeId id : {1, 2, 3}) nodes.emplace(id, ElectionCore(id, {1, 2, 3}));
  Wire w;
  nodes.at(1).start_election(w.from(1));
  bool won = false;
  while (!w.queue.empty()) {
    const Message m = w.queue.front();
    w.queue.pop_front();
    if (nodes.at(m.to).on_message(m, w.from(m.to))) {
      won = true;
      nodes.at(m.to).broadcast_heartbeat(w.from(m.to));
    }
  }
  EXPECT_TRUE(won);
  EXPECT_EQ(nodes.at(1).role(), Role::kLeader);
  EXPECT_EQ(nodes.at(2).role(), Role::kFollower);
  EXPECT_EQ(nodes.at(2).leader(), 1u);
  EXPECT_EQ(nodes.at(3).leader(), 1u);
}

TEST(ElectionCore, StaleHeartbeatIgnoredAndRestartKeepsTerm) {
  ElectionCore c(2, {1, 2, 3});
  Wire w;
  c.observe_term(5);
  c.on_message({1, 2, MessageKind::kHeartbeat, encode(HeartbeatMsg{4, 1})}, w.from(2));
  EXPECT_FALSE(c.leader().has_value());
  c.on_message({3, 2, MessageKind::kRequestVote, encode(RequestVoteMsg{5, 3})}, w.from(2));
  c.restart();
  EXPECT_EQ(c.term(), 5u);
  EXPECT_EQ(c.voted_for(), 3u);
  EXPECT_EQ(c.role(), Role::kFollower);
  c.accept_leader(1, 6);
  EXPECT_EQ(c.leader(), 1u);
  EXPECT_THROW(ElectionCore(9, {1, 2}), std::invalid_argument);
}

TEST(ElectLeader, SingleNodeImmediately) {
  ElectionSetup s;
  s.members = {1};
  const auto r = elect_leader(s);
  ASSERT_TRUE(r.leader.has_value());
  EXPECT_EQ(*r.leader, 1u);
  EXPECT_LE(r.elapsed_ms, s.options.timeout_max_ms);
}

TEST(ElectLeader, ThreeNodesExactlyOneLeader) {
  ElectionSetup s;
  s.members = {1, 2, 3};
  const auto r = elect_leader(s);
  ASSERT_TRUE(r.leader.has_value());
  EXPECT_TRUE(r.safe);
  EXPECT_EQ(r.leaders_by_term.at(r.term).size(), 1u);
}

TEST(ElectLeader, TwoOfThreeStillElect) {
  for (NodeId down : {1, 2, 3}) {
    ElectionSetup s;
    s.members = {1, 2, 3};
    s.crashed = {down};
    const auto r = elect_leader(s);
    ASSERT_TRUE(r.leader.has_value());
    EXPECT_NE(*r.leader, down);
  }
}

TEST(ElectLeader, NoMajorityNeverElects) {
  ElectionSetup s;
  s.members = {1, 2, 3, 4, 5};
  s.crashed = {1, 2, 3};
  s.deadline_ms = 60'000;
  const auto r = elect_leader(s);
  EXPECT_FALSE(r.leader.has_value());
  EXPECT_TRUE(r.leaders_by_term.empty());
  EXPECT_GT(r.highest_term, 10u);
}

TEST(ElectLeader, RestartRestoresMajority) {
  ElectionSetup s;
  s.members = {1, 2, 3};
  s.crashed = {1, 2};
  s.faults = FaultPlan::parse_string("restart 2 at +2000\n");
  const auto r = elect_leader(s);
  ASSERT_TRUE(r.leader.has_value());
  EXPECT_GE(r.elapsed_ms, 2000);
}

TEST(ElectLeader, StartTermIsRespected) {
  ElectionSetup s;
  s.members = {1, 2, 3};
  s.start_term = 40;
  const auto r = elect_leader(s);
  ASSERT_TRUE(r.leader.has_value());
  EXPECT_GT(r.term, 40u);
}

TEST(ElectLeader, SafetyUnderDelayAndDrop) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ElectionSetup s;
    s.members = {1, 2, 3, 4, 5};
    s.fabric = {5, 120, 0.2, seed, false};
    s.seed = seed;
    s.deadline_ms = 30'000;
    const auto r = elect_leader(s);
    EXPECT_TRUE(r.safe) << "seed " << seed;
    for (const auto& [term, leaders] : r.leaders_by_term) EXPECT_LE(leaders.size(), 1u);
    EXPECT_TRUE(r.leader.has_value()) << "seed " << seed;
  }
}

}  // namespace
}  // namespace ibex::coord
