// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex {

// Sorted, duplicate-free read and write sets of a call.
struct Footprint {
  std::vector<Address> reads;
  std::vector<Address> writes;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

Footprint footprint(const ContractCall& call);

enum class TxFailure {
  kInsufficientFunds,
  kNotRegistered,
  kAlreadyVoted,
  kOverflow,
};

std::string_view failure_name(TxFailure f);

// Either the writes of a successful call or the reason it failed. A failed
// call contributes no writes.
using ExecResult = std::variant<StateDelta, TxFailure>;

inline bool succeeded(const ExecResult& r) { return std::holds_alternative<StateDelta>(r); }

// Pure function of the call and the values it reads through view.
ExecResult execute(const ContractCall& call, const StateView& view);

// Voter records pack a voted flag into bit 63 and the voting weight below it.
struct VoterRecord {
  bool voted = false;
  std::uint64_t weight = 0;
};

VoterRecord decode_voter(const Value& v);
Value encode_voter(const VoterRecord& r);

}  // namespace ibex
