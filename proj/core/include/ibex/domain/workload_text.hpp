// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Workload files hold one call per line as `<variant> <args...>`:
//
//   deposit <client> <key> <amount>
//   withdraw <client> <key> <amount>
//   transfer <from_client> <from_key> <to_client> <to_key> <amount>
//   balance <client> <key>
//   register_voter <voter>
//   register_candidate <candidate>
//   vote <voter> <candidate>
//   transfer_vote <from_voter> <to_voter>
//   query <candidate>
//
// `#` starts a comment; blank lines are ignored.
std::vector<ContractCall> parse_workload(std::istream& in);
std::vector<ContractCall> parse_workload_string(const std::string& text);

std::string format_call(const ContractCall& call);

}  // namespace ibex
