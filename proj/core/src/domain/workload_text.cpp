// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/domain/workload_text.hpp"

#include <charconv>
#include <sstream>

namespace ibex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::uint64_t parse_amount(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line, "bad amount '" + s + "'");
  return v;
}

}  // namespace

std::vector<ContractCall> parse_workload(std::istream& in) {
  std::vector<ContractCall> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto w = split_words(raw);
    if (w.empty()) continue;
    auto want = [&](std::size_t n) {
      if (w.size() != n + 1) {
        throw ParseError(line_no, "'" + w[0] + "' takes " + std::to_string(n) + " arguments");
      }
    };
    const std::string& op = w[0];
    if (op == "deposit") {
      want(3);
      out.emplace_back(call::Deposit{w[1], w[2], parse_amount(w[3], line_no)});
    } else if (op == "withdraw") {
      want(3);
      out.emplace_back(call::Withdraw{w[1], w[2], parse_amount(w[3], line_no)});
    } else if (op == "transfer") {
      want(5);
      out.emplace_back(call::Transfer{w[1], w[2], w[3], w[4], parse_amount(w[5], line_no)});
    } else if (op == "balance") {
      want(2);
      out.emplace_back(call::Balance{w[1], w[2]});
    } else if (op == "register_voter") {
      want(1);
      out.emplace_back(call::RegisterVoter{w[1]});
    } else if (op == "register_candidate") {
      want(1);
      out.emplace_back(call::RegisterCandidate{w[1]});
    } else if (op == "vote") {
      want(2);
      out.emplace_back(call::CastVote{w[1], w[2]});
    } else if (op == "transfer_vote") {
      want(2);
      out.emplace_back(call::TransferVote{w[1], w[2]});
    } else if (op == "query") {
      want(1);
      out.emplace_back(call::QueryResults{w[1]});
    } else {
      throw ParseError(line_no, "unknown variant '" + op + "'");
    }
  }
  return out;
}

std::vector<ContractCall> parse_workload_string(const std::string& text) {
  std::istringstream in(text);
  return parse_workload(in);
}

std::string format_call(const ContractCall& c) {
  return std::visit(
      Overloaded{
          [](const call::RegisterVoter& x) { return "register_voter " + x.voter; },
          [](const call::RegisterCandidate& x) { return "register_candidate " + x.candidate; },
          [](const call::CastVote& x) { return "vote " + x.voter + " " + x.candidate; },
          [](const call::TransferVote& x) {
            return "transfer_vote " + x.from_voter + " " + x.to_voter;
          },
          [](const call::QueryResults& x) { return "query " + x.candidate; },
          [](const call::Deposit& x) {
            return "deposit " + x.client + " " + x.key + " " + std::to_string(x.amount);
          },
          [](const call::Withdraw& x) {
            return "withdraw " + x.client + " " + x.key + " " + std::to_string(x.amount);
          },
          [](const call::Transfer& x) {
            return "transfer " + x.from_client + " " + x.from_key + " " + x.to_client + " " +
                   x.to_key + " " + std::to_string(x.amount);
          },
          [](const call::Balance& x) { return "balance " + x.client + " " + x.key; },
      },
      c);
}

}  // namespace ibex
