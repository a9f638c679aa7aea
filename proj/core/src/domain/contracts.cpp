// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/domain/contracts.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ibex {

namespace {

constexpr std::uint64_t kVotedBit = std::uint64_t{1} << 63;
constexpr std::uint64_t kMaxWeight = kVotedBit - 1;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Address> sorted_unique(std::vector<Address> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Footprint read_write(std::vector<Address> addrs) {
  auto s = sorted_unique(std::move(addrs));
  return Footprint{s, s};
}

std::uint64_t balance_of(const StateView& view, const Address& a) {
  const auto v = view.get(a);
  return v ? decode_u64_value(*v) : 0;
}

}  // namespace

Address::Address(std::string bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw std::invalid_argument("address must not be empty");
  if (bytes_.size() > kMaxSize) throw std::invalid_argument("address longer than 64 bytes");
}

Address wallet_address(std::string_view client, std::string_view key) {
  std::string s = "wallet/";
  s.append(client).append("/").append(key);
  return Address(std::move(s));
}

Address voter_address(std::string_view voter) {
  return Address(std::string("vote/voter/").append(voter));
}

Address candidate_address(std::string_view candidate) {
  return Address(std::string("vote/cand/").append(candidate));
}

Contract contract_of(const ContractCall& c) { return c.index() <= 4 ? Contract::kVoting : Contract::kWallet; }

const Value* StateDelta::find(const Address& key) const {
  const auto it = writes_.find(key);
  return it == writes_.end() ? nullptr : &it->second;
}

void StateDelta::merge(const StateDelta& other) {
  for (const auto& [k, v] : other.writes_) {
    auto [it, inserted] = writes_.emplace(k, v);
    if (!inserted && it->second != v) {
      throw InvariantViolation("conflicting writes to " + k.bytes() + " while merging deltas");
    }
  }
}

std::optional<Value> MapStateView::get(const Address& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void MapStateView::apply(const StateDelta& delta) {
  for (const auto& [k, v] : delta.writes()) values_[k] = v;
}

VoterRecord decode_voter(const Value& v) {
  const std::uint64_t raw = decode_u64_value(v);
  return VoterRecord{(raw & kVotedBit) != 0, raw & kMaxWeight};
}

Value encode_voter(const VoterRecord& r) {
  return encode_u64_value((r.voted ? kVotedBit : 0) | (r.weight & kMaxWeight));
}

std::string_view failure_name(TxFailure f) {
  switch (f) {
    case TxFailure::kInsufficientFunds: return "InsufficientFunds";
    case TxFailure::kNotRegistered: return "NotRegistered";
    case TxFailure::kAlreadyVoted: return "AlreadyVoted";
    case TxFailure::kOverflow: return "Overflow";
  }
  return "Unknown";
}

Footprint footprint(const ContractCall& call) {
  return std::visit(
      Overloaded{
          [](const call::RegisterVoter& c) { return read_write({voter_address(c.voter)}); },
          [](const call::RegisterCandidate& c) {
            return read_write({candidate_address(c.candidate)});
          },
          [](const call::CastVote& c) {
            return read_write({voter_address(c.voter), candidate_address(c.candidate)});
          },
          [](const call::TransferVote& c) {
            return read_write({voter_address(c.from_voter), voter_address(c.to_voter)});
          },
          [](const call::QueryResults& c) {
            return Footprint{{candidate_address(c.candidate)}, {}};
          },
          [](const call::Deposit& c) { return read_write({wallet_address(c.client, c.key)}); },
          [](const call::Withdraw& c) { return read_write({wallet_address(c.client, c.key)}); },
          [](const call::Transfer& c) {
            return read_write(
                {wallet_address(c.from_client, c.from_key), wallet_address(c.to_client, c.to_key)});
          },
          [](const call::Balance& c) {
            return Footprint{{wallet_address(c.client, c.key)}, {}};
          },
      },
      call);
}

ExecResult execute(const ContractCall& call, const StateView& view) {
  return std::visit(
      Overloaded{
          [&](const call::RegisterVoter& c) -> ExecResult {
            const Address a = voter_address(c.voter);
            StateDelta d;
            // Re-registration is a no-op so an existing vote is never reset.
            if (!view.get(a)) d.put(a, encode_voter({false, 1}));
            return d;
          },
          [&](const call::RegisterCandidate& c) -> ExecResult {
            const Address a = candidate_address(c.candidate);
            StateDelta d;
            if (!view.get(a)) d.put(a, encode_u64_value(0));
            return d;
          },
          [&](const call::CastVote& c) -> ExecResult {
            const Address va = voter_address(c.voter);
            const Address ca = candidate_address(c.candidate);
            const auto voter = view.get(va);
            const auto cand = view.get(ca);
            if (!voter || !cand) return TxFailure::kNotRegistered;
            VoterRecord rec = decode_voter(*voter);
            if (rec.voted) return TxFailure::kAlreadyVoted;
            const std::uint64_t tally = decode_u64_value(*cand);
            if (tally > std::numeric_limits<std::uint64_t>::max() - rec.weight) {
              return TxFailure::kOverflow;
            }
            rec.voted = true;
            StateDelta d;
            d.put(va, encode_voter(rec));
            d.put(ca, encode_u64_value(tally + rec.weight));
            return d;
          },
          [&](const call::TransferVote& c) -> ExecResult {
            const Address fa = voter_address(c.from_voter);
            const Address ta = voter_address(c.to_voter);
            const auto from = view.get(fa);
            const auto to = view.get(ta);
            if (!from || !to) return TxFailure::kNotRegistered;
            VoterRecord src = decode_voter(*from);
            if (src.voted) return TxFailure::kAlreadyVoted;
            StateDelta d;
            if (fa == ta) return d;
            VoterRecord dst = decode_voter(*to);
            if (dst.weight > kMaxWeight - src.weight) return TxFailure::kOverflow;
            dst.weight += src.weight;
            src.voted = true;
            d.put(fa, encode_voter(src));
            d.put(ta, encode_voter(dst));
            return d;
          },
          [&](const call::QueryResults& c) -> ExecResult {
            if (!view.get(candidate_address(c.candidate))) return TxFailure::kNotRegistered;
            return StateDelta{};
          },
          [&](const call::Deposit& c) -> ExecResult {
            const Address a = wallet_address(c.client, c.key);
            const std::uint64_t bal = balance_of(view, a);
            if (bal > std::numeric_limits<std::uint64_t>::max() - c.amount) return TxFailure::kOverflow;
            StateDelta d;
            d.put(a, encode_u64_value(bal + c.amount));
            return d;
          },
          [&](const call::Withdraw& c) -> ExecResult {
            const Address a = wallet_address(c.client, c.key);
            const std::uint64_t bal = balance_of(view, a);
            if (bal < c.amount) return TxFailure::kInsufficientFunds;
            StateDelta d;
            d.put(a, encode_u64_value(bal - c.amount));
            return d;
          },
          [&](const call::Transfer& c) -> ExecResult {
            const Address fa = wallet_address(c.from_client, c.from_key);
            const Address ta = wallet_address(c.to_client, c.to_key);
            const std::uint64_t from = balance_of(view, fa);
            if (from < c.amount) return TxFailure::kInsufficientFunds;
            StateDelta d;
            if (fa == ta) {
              d.put(fa, encode_u64_value(from));
              return d;
            }
            const std::uint64_t to = balance_of(view, ta);
            if (to > std::numeric_limits<std::uint64_t>::max() - c.amount) return TxFailure::kOverflow;
            d.put(fa, encode_u64_value(from - c.amount));
            d.put(ta, encode_u64_value(to + c.amount));
            return d;
          },
          [&](const call::Balance& c) -> ExecResult {
            (void)view.get(wallet_address(c.client, c.key));
            return StateDelta{};
          },
      },
      call);
}

}  // namespace ibex
