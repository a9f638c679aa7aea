// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <set>

#include "ibex/domain/contracts.hpp"
#include "ibex/domain/encoding.hpp"
#include "ibex/domain/signature.hpp"
#include "ibex/domain/workload_text.hpp"
#include "oracles.hpp"

namespace ibex {
namespace {

Block two_tx_wallet_block() {
  Block b;
  b.height = 1;
  b.parent_hash.fill(0x11);
  Transaction t0;
  t0.tx_id = 0;
  t0.call = call::Deposit{"a", "k", 100};
  t0.expiry = 5;
  t0.submitter = Bytes{'s'};
  Transaction t1;
  t1.tx_id = 1;
  t1.call = call::Transfer{"a", "k", "b", "k", 7};
  t1.expiry = 5;
  t1.submitter = Bytes{'s'};
  b.txs = {t0, t1};
  b.producer_id = 2;
  return b;
}

// Written out by hand: u64 fields are 16 hex digits, byte strings carry a
// 4-byte length, the tx list a 4-byte count, calls a u64 variant tag.
std::string golden_hex() {
  std::string h;
  h += "0000000000000001";                                    // height
  h += "00000020" + std::string(64, '1');                     // parent_hash
  h += "00000002";                                            // tx count
  h += "0000000000000000";                                    // tx0 id
  h += "0000000000000005";                                    // Deposit tag
  h += "0000000161" "000000016b" "0000000000000064";          // "a" "k" 100
  h += "00000000";                                            // signature
  h += "0000000000000005";                                    // expiry
  h += "0000000173";                                          // submitter "s"
  h += "0000000000000001";                                    // tx1 id
  h += "0000000000000007";                                    // Transfer tag
  h += "0000000161" "000000016b" "0000000162" "000000016b";   // a k b k
  h += "0000000000000007";                                    // amount
  h += "00000000" "0000000000000005" "0000000173";
  h += "00000020" + std::string(64, '0');                     // state_root
  h += "0000000000000002";                                    // producer
  return h;
}

TEST(Encoding, GoldenTwoTxWalletBlock) {
  const Block b = two_tx_wallet_block();
  EXPECT_EQ(to_hex(canonical_encode(b)), golden_hex());
}

TEST(Encoding, RoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Block b;
    b.height = rng.next();
    b.parent_hash[3] = static_cast<std::uint8_t>(trial);
    b.txs = oracle::random_txs(rng, rng.below(20), 6);
    KeyedDigestSigner signer;
    for (auto& tx : b.txs) signer.sign(tx);
    b.producer_id = rng.below(9);
    const Bytes enc = canonical_encode(b);
    const Block back = decode_block(enc);
    EXPECT_EQ(back, b);
    EXPECT_EQ(canonical_encode(back), enc);
  }
}

TEST(Encoding, DifferingAmountChangesHash) {
  Block a = two_tx_wallet_block();
  Block b = a;
  std::get<call::Transfer>(b.txs[1].call).amount = 8;
  EXPECT_NE(canonical_encode(a), canonical_encode(b));
  EXPECT_NE(block_hash(a), block_hash(b));
  EXPECT_EQ(block_hash(a), sha256(canonical_encode(a)));
}

TEST(Encoding, RejectsUnknownTagAndTrailingBytes) {
  Bytes enc = canonical_encode(two_tx_wallet_block());
  Bytes extra = enc;
  extra.push_back(0);
  EXPECT_THROW(decode_block(extra), DecodeError);
  // tx0's call tag sits after height, parent and count.
  Bytes bad = enc;
  bad[8 + 36 + 4 + 8 + 7] = 0x42;
  EXPECT_THROW(decode_block(bad), DecodeError);
}

TEST(Encoding, DeltaRoundTripAndOrder) {
  StateDelta d;
  d.put(Address("b"), Bytes{2});
  d.put(Address("a"), Bytes{1});
  EXPECT_EQ(to_hex(encode_delta(d)), "00000002" "0000000161" "0000000101" "0000000162" "0000000102");
  EXPECT_EQ(decode_delta(encode_delta(d)), d);
}

TEST(Address, Limits) {
  EXPECT_THROW(Address(""), std::invalid_argument);
  EXPECT_THROW(Address(std::string(65, 'x')), std::invalid_argument);
  EXPECT_NO_THROW(Address(std::string(64, 'x')));
  EXPECT_LT(Address("a"), Address("b"));
}

TEST(StateDelta, MergeRules) {
  StateDelta a, b;
  a.put(Address("x"), Bytes{1});
  b.put(Address("y"), Bytes{2});
  a.merge(b);
  EXPECT_EQ(a.size(), 2u);
  StateDelta same;
  same.put(Address("x"), Bytes{1});
  EXPECT_NO_THROW(a.merge(same));
  StateDelta clash;
  clash.put(Address("x"), Bytes{9});
  EXPECT_THROW(a.merge(clash), InvariantViolation);
}

TEST(Footprint, Examples) {
  const auto bal = footprint(call::Balance{"c1", "k1"});
  EXPECT_EQ(bal.reads, std::vector<Address>{wallet_address("c1", "k1")});
  EXPECT_TRUE(bal.writes.empty());
  const auto tr = footprint(call::Transfer{"c1", "k1", "c2", "k2", 5});
  const std::vector<Address> both{wallet_address("c1", "k1"), wallet_address("c2", "k2")};
  EXPECT_EQ(tr.reads, both);
  EXPECT_EQ(tr.writes, both);
}

class TracingView : public StateView {
public:
  explicit TracingView(const StateView& inner) : inner_(&inner) {}
  std::optional<Value> get(const Address& key) const override {
    reads.insert(key);
    return inner_->get(key);
  }
  mutable std::set<Address> reads;

private:
  const StateView* inner_;
};

TEST(Footprint, MatchesInstrumentedExecution) {
  Rng rng(11);
  MapStateView state;
  for (int i = 0; i < 1000; ++i) {
    const ContractCall c = oracle::random_call(rng, 5);
    TracingView tv(state);
    const ExecResult r = execute(c, tv);
    const Footprint fp = footprint(c);
    const std::set<Address> fp_reads(fp.reads.begin(), fp.reads.end());
    const std::set<Address> fp_writes(fp.writes.begin(), fp.writes.end());
    for (const auto& a : tv.reads) EXPECT_TRUE(fp_reads.contains(a)) << format_call(c);
    if (succeeded(r)) {
      EXPECT_EQ(tv.reads, fp_reads) << format_call(c);
      for (const auto& [k, v] : std::get<StateDelta>(r).writes()) EXPECT_TRUE(fp_writes.contains(k));
      state.apply(std::get<StateDelta>(r));
    }
  }
}

TEST(Wallet, DepositThenBalanceAndGuardedWithdraw) {
  MapStateView s;
  auto r = execute(call::Deposit{"c", "k", 100}, s);
  ASSERT_TRUE(succeeded(r));
  s.apply(std::get<StateDelta>(r));
  EXPECT_EQ(decode_u64_value(*s.get(wallet_address("c", "k"))), 100u);
  EXPECT_TRUE(succeeded(execute(call::Balance{"c", "k"}, s)));

  MapStateView low;
  low.apply([] {
    StateDelta d;
    d.put(wallet_address("c", "k"), encode_u64_value(10));
    return d;
  }());
  const auto w = execute(call::Withdraw{"c", "k", 50}, low);
  ASSERT_FALSE(succeeded(w));
  EXPECT_EQ(std::get<TxFailure>(w), TxFailure::kInsufficientFunds);
  EXPECT_EQ(decode_u64_value(*low.get(wallet_address("c", "k"))), 10u);
}

TEST(Wallet, ScalarReplayOracle) {
  Rng rng(5);
  MapStateView s;
  oracle::WalletReplay replay;
  for (int i = 0; i < 500; ++i) {
    ContractCall c;
    do {
      c = oracle::random_call(rng, 4);
    } while (contract_of(c) != Contract::kWallet);
    replay.apply(c);
    const auto r = execute(c, s);
    if (succeeded(r)) s.apply(std::get<StateDelta>(r));
  }
  for (const auto& [name, bal] : replay.balances()) {
    const auto v = s.get(Address("wallet/" + name));
    EXPECT_EQ(v ? decode_u64_value(*v) : 0u, bal) << name;
  }
  for (const auto& [addr, v] : s.values()) {
    EXPECT_TRUE(replay.balances().contains(addr.bytes().substr(7)));
  }
}

TEST(Voting, RegisterVoteTransferQuery) {
  MapStateView s;
  auto run = [&](const ContractCall& c) {
    auto r = execute(c, s);
    if (succeeded(r)) s.apply(std::get<StateDelta>(r));
    return r;
  };
  EXPECT_EQ(std::get<TxFailure>(run(call::CastVote{"v1", "c"})), TxFailure::kNotRegistered);
  run(call::RegisterVoter{"v1"});
  run(call::RegisterVoter{"v2"});
  run(call::RegisterCandidate{"c"});
  ASSERT_TRUE(succeeded(run(call::TransferVote{"v2", "v1"})));
  ASSERT_TRUE(succeeded(run(call::CastVote{"v1", "c"})));
  EXPECT_EQ(decode_u64_value(*s.get(candidate_address("c"))), 2u);
  EXPECT_EQ(std::get<TxFailure>(run(call::CastVote{"v1", "c"})), TxFailure::kAlreadyVoted);
  EXPECT_EQ(std::get<TxFailure>(run(call::CastVote{"v2", "c"})), TxFailure::kAlreadyVoted);
  EXPECT_TRUE(succeeded(run(call::QueryResults{"c"})));
  const auto rec = decode_voter(*s.get(voter_address("v1")));
  EXPECT_TRUE(rec.voted);
  EXPECT_EQ(rec.weight, 2u);
}

TEST(Signature, VerifyAndTamper) {
  KeyedDigestSigner signer;
  Transaction tx;
  tx.call = call::Deposit{"a", "b", 3};
  signer.sign(tx);
  EXPECT_TRUE(signer.verify(tx));
  tx.signature[0] ^= 1;
  EXPECT_FALSE(signer.verify(tx));
  signer.sign(tx);
  std::get<call::Deposit>(tx.call).amount = 4;
  EXPECT_FALSE(signer.verify(tx));
  EXPECT_FALSE(KeyedDigestSigner("other").verify([&] {
    Transaction t = tx;
    signer.sign(t);
    return t;
  }()));
}

TEST(WorkloadText, ParseFormatRoundTrip) {
  const std::string text =
      "# comment\n"
      "deposit alice k1 100\n"
      "\n"
      "transfer alice k1 bob k2 5\n"
      "register_voter v\n"
      "register_candidate c\n"
      "vote v c\n"
      "transfer_vote v w\n"
      "query c\n"
      "withdraw alice k1 1\n"
      "balance bob k2\n";
  const auto calls = parse_workload_string(text);
  ASSERT_EQ(calls.size(), 9u);
  EXPECT_EQ(calls[1], ContractCall(call::Transfer{"alice", "k1", "bob", "k2", 5}));
  std::string again;
  for (const auto& c : calls) again += format_call(c) + "\n";
  EXPECT_EQ(parse_workload_string(again), calls);
}

TEST(WorkloadText, ErrorsCarryLineNumbers) {
  try {
    parse_workload_string("deposit a b 1\nfly away\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_workload_string("deposit a b notanumber\n"), ParseError);
  EXPECT_THROW(parse_workload_string("vote onlyone\n"), ParseError);
}

}  // namespace
}  // namespace ibex
