// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ibex/common/bytes.hpp"

namespace ibex {

using NodeId = std::uint64_t;
using TxId = std::uint32_t;

// Contract storage key. Byte-wise ordered, at most 64 bytes, never empty.
class Address {
public:
  static constexpr std::size_t kMaxSize = 64;

  Address() = default;
  explicit Address(std::string bytes);

  const std::string& bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  ByteView view() const { return as_bytes(bytes_); }

  friend bool operator==(const Address&, const Address&) = default;
  friend std::strong_ordering operator<=>(const Address& a, const Address& b) {
    const int c = a.bytes_.compare(b.bytes_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

private:
  std::string bytes_;
};

Address wallet_address(std::string_view client, std::string_view key);
Address voter_address(std::string_view voter);
Address candidate_address(std::string_view candidate);

using Value = Bytes;

namespace call {

struct RegisterVoter {
  std::string voter;
  friend bool operator==(const RegisterVoter&, const RegisterVoter&) = default;
};
struct RegisterCandidate {
  std::string candidate;
  friend bool operator==(const RegisterCandidate&, const RegisterCandidate&) = default;
};
struct CastVote {
  std::string voter;
  std::string candidate;
  friend bool operator==(const CastVote&, const CastVote&) = default;
};
// Delegates from_voter's voting weight to to_voter.
struct TransferVote {
  std::string from_voter;
  std::string to_voter;
  friend bool operator==(const TransferVote&, const TransferVote&) = default;
};
struct QueryResults {
  std::string candidate;
  friend bool operator==(const QueryResults&, const QueryResults&) = default;
};
struct Deposit {
  std::string client;
  std::string key;
  std::uint64_t amount = 0;
  friend bool operator==(const Deposit&, const Deposit&) = default;
};
struct Withdraw {
  std::string client;
  std::string key;
  std::uint64_t amount = 0;
  friend bool operator==(const Withdraw&, const Withdraw&) = default;
};
struct Transfer {
  std::string from_client;
  std::string from_key;
  std::string to_client;
  std::string to_key;
  std::uint64_t amount = 0;
  friend bool operator==(const Transfer&, const Transfer&) = default;
};
struct Balance {
  std::string client;
  std::string key;
  friend bool operator==(const Balance&, const Balance&) = default;
};

}  // namespace call

// Variant order fixes the canonical tag (index 0..8).
using ContractCall = std::variant<call::RegisterVoter, call::RegisterCandidate, call::CastVote,
                                  call::TransferVote, call::QueryResults, call::Deposit,
                                  call::Withdraw, call::Transfer, call::Balance>;

enum class Contract { kVoting, kWallet };

Contract contract_of(const ContractCall& c);

struct Transaction {
  TxId tx_id = 0;
  ContractCall call;
  Bytes signature;
  std::uint64_t expiry = 0;
  Bytes submitter;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest parent_hash{};
  std::vector<Transaction> txs;
  Digest state_root{};
  NodeId producer_id = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// Staged key->value writes. Ordered so that encodings are canonical.
class StateDelta {
public:
  using Map = std::map<Address, Value>;

  void put(Address key, Value value) { writes_[std::move(key)] = std::move(value); }
  const Value* find(const Address& key) const;
  bool empty() const { return writes_.empty(); }
  std::size_t size() const { return writes_.size(); }
  const Map& writes() const { return writes_; }

  // Adds other's writes. Overlapping keys with differing values throw
  // InvariantViolation; identical overlaps are accepted.
  void merge(const StateDelta& other);

  friend bool operator==(const StateDelta&, const StateDelta&) = default;

private:
  Map writes_;
};

class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Read access used during execution.
class StateView {
public:
  virtual ~StateView() = default;
  virtual std::optional<Value> get(const Address& key) const = 0;
};

// In-memory view for tests and serial replays.
class MapStateView : public StateView {
public:
  MapStateView() = default;
  explicit MapStateView(std::map<Address, Value> values) : values_(std::move(values)) {}
  std::optional<Value> get(const Address& key) const override;
  void apply(const StateDelta& delta);
  const std::map<Address, Value>& values() const { return values_; }

private:
  std::map<Address, Value> values_;
};

}  // namespace ibex

template <>
struct std::hash<ibex::Address> {
  std::size_t operator()(const ibex::Address& a) const noexcept {
    return std::hash<std::string>{}(a.bytes());
  }
};
