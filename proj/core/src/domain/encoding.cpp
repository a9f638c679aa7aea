// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/domain/encoding.hpp"

#include <limits>
#include <string>

namespace ibex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void encode_call(Writer& w, const ContractCall& c) {
  w.u64(c.index());
  std::visit(Overloaded{
                 [&](const call::RegisterVoter& x) { w.bytes(x.voter); },
                 [&](const call::RegisterCandidate& x) { w.bytes(x.candidate); },
                 [&](const call::CastVote& x) {
                   w.bytes(x.voter);
                   w.bytes(x.candidate);
                 },
                 [&](const call::TransferVote& x) {
                   w.bytes(x.from_voter);
                   w.bytes(x.to_voter);
                 },
                 [&](const call::QueryResults& x) { w.bytes(x.candidate); },
                 [&](const call::Deposit& x) {
                   w.bytes(x.client);
                   w.bytes(x.key);
                   w.u64(x.amount);
                 },
                 [&](const call::Withdraw& x) {
                   w.bytes(x.client);
                   w.bytes(x.key);
                   w.u64(x.amount);
                 },
                 [&](const call::Transfer& x) {
                   w.bytes(x.from_client);
                   w.bytes(x.from_key);
                   w.bytes(x.to_client);
                   w.bytes(x.to_key);
                   w.u64(x.amount);
                 },
                 [&](const call::Balance& x) {
                   w.bytes(x.client);
                   w.bytes(x.key);
                 },
             },
             c);
}

ContractCall decode_call(Reader& r) {
  const std::uint64_t tag = r.u64();
  switch (tag) {
    case 0: return call::RegisterVoter{r.str()};
    case 1: return call::RegisterCandidate{r.str()};
    case 2: {
      auto v = r.str();
      return call::CastVote{std::move(v), r.str()};
    }
    case 3: {
      auto f = r.str();
      return call::TransferVote{std::move(f), r.str()};
    }
    case 4: return call::QueryResults{r.str()};
    case 5:
    case 6: {
      auto client = r.str();
      auto key = r.str();
      const auto amount = r.u64();
      if (tag == 5) return call::Deposit{std::move(client), std::move(key), amount};
      return call::Withdraw{std::move(client), std::move(key), amount};
    }
    case 7: {
      call::Transfer t;
      t.from_client = r.str();
      t.from_key = r.str();
      t.to_client = r.str();
      t.to_key = r.str();
      t.amount = r.u64();
      return t;
    }
    case 8: {
      auto client = r.str();
      return call::Balance{std::move(client), r.str()};
    }
    default: throw DecodeError("unknown contract call tag " + std::to_string(tag));
  }
}

Bytes encode_call(const ContractCall& call) {
  Writer w;
  encode_call(w, call);
  return std::move(w).take();
}

void encode_tx(Writer& w, const Transaction& tx) {
  w.u64(tx.tx_id);
  encode_call(w, tx.call);
  w.bytes(tx.signature);
  w.u64(tx.expiry);
  w.bytes(tx.submitter);
}

Transaction decode_tx(Reader& r) {
  Transaction tx;
  const std::uint64_t id = r.u64();
  if (id > std::numeric_limits<TxId>::max()) throw DecodeError("tx_id out of range");
  tx.tx_id = static_cast<TxId>(id);
  tx.call = decode_call(r);
  tx.signature = r.bytes();
  tx.expiry = r.u64();
  tx.submitter = r.bytes();
  return tx;
}

Bytes canonical_encode(const Block& block) {
  Writer w;
  w.u64(block.height);
  w.digest(block.parent_hash);
  w.count(block.txs.size());
  for (const auto& tx : block.txs) encode_tx(w, tx);
  w.digest(block.state_root);
  w.u64(block.producer_id);
  return std::move(w).take();
}

Block decode_block(ByteView bytes) {
  Reader r(bytes);
  Block b;
  b.height = r.u64();
  b.parent_hash = r.digest();
  const std::uint32_t n = r.count();
  b.txs.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) b.txs.push_back(decode_tx(r));
  b.state_root = r.digest();
  b.producer_id = r.u64();
  r.expect_done();
  return b;
}

Digest block_hash(const Block& block, HashId hash) {
  const Bytes enc = canonical_encode(block);
  return hash256(hash, enc);
}

Bytes encode_delta(const StateDelta& delta) {
  Writer w;
  w.count(delta.size());
  for (const auto& [k, v] : delta.writes()) {
    w.bytes(k.bytes());
    w.bytes(v);
  }
  return std::move(w).take();
}

StateDelta decode_delta(ByteView bytes) {
  Reader r(bytes);
  StateDelta d;
  const std::uint32_t n = r.count();
  for (std::uint32_t i = 0; i < n; ++i) {
    Address k(r.str());
    d.put(std::move(k), r.bytes());
  }
  r.expect_done();
  return d;
}

Digest delta_digest(const StateDelta& delta, HashId hash) { return hash256(hash, encode_delta(delta)); }

}  // namespace ibex
