// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/bench/workload.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "ibex/common/rng.hpp"
#include "ibex/domain/contracts.hpp"
#include "ibex/domain/signature.hpp"

namespace ibex::bench {

std::string_view contract_name(Contract c) { return c == Contract::kVoting ? "voting" : "wallet"; }

Contract parse_contract(std::string_view s) {
  if (s == "voting") return Contract::kVoting;
  if (s == "wallet") return Contract::kWallet;
  throw std::invalid_argument("unknown contract '" + std::string(s) + "'");
}

namespace {

constexpr std::uint64_t kOpeningBalance = 1'000'000'000;
constexpr std::uint64_t kExpiry = std::numeric_limits<std::uint64_t>::max();

// Two transactions conflict iff they share their shareable address, so the
// edge count is the sum of C(g, 2) over address groups of the same kind.
struct Groups {
  std::vector<std::uint32_t> group_of;  // tx -> group id (a tx index)
  std::vector<std::uint32_t> size;      // group id -> member count
  std::vector<std::uint8_t> kind;       // tx -> slot kind
  std::uint64_t edges = 0;

  explicit Groups(std::vector<std::uint8_t> kinds) : kind(std::move(kinds)) {
    const auto n = kind.size();
    group_of.resize(n);
    size.assign(n, 1);
    for (std::uint32_t i = 0; i < n; ++i) group_of[i] = i;
  }

  // Edge change if tx i joins group g.
  std::int64_t delta(std::uint32_t i, std::uint32_t g) const {
    const std::uint32_t from = group_of[i];
    if (from == g) return 0;
    return static_cast<std::int64_t>(size[g]) - static_cast<std::int64_t>(size[from] - 1);
  }

  void move(std::uint32_t i, std::uint32_t g) {
    edges = static_cast<std::uint64_t>(static_cast<std::int64_t>(edges) + delta(i, g));
    --size[group_of[i]];
    group_of[i] = g;
    ++size[g];
  }
};

std::string wallet_client(std::uint32_t i) { return "cl" + std::to_string(i % 16); }
std::string wallet_key(std::uint32_t i, char tag) { return std::string(1, tag) + std::to_string(i); }

}  // namespace

Workload generate_workload(const WorkloadSpec& spec) {
  const std::size_t n = spec.tx_count;
  if (n == 0) throw std::invalid_argument("tx_count must be positive");
  if (n > std::numeric_limits<std::uint32_t>::max() / 2) throw std::invalid_argument("tx_count too large");
  if (!(spec.target_degree >= 0.0 && spec.target_degree <= 1.0)) {
    throw WorkloadError("target degree must lie in [0, 1]", 0.0);
  }
  Rng rng(spec.seed);
  const double pairs = n < 2 ? 0.0 : static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const bool hub = n >= 2 && spec.target_degree >= 1.0 - spec.tolerance;

  // Slot kinds: wallet has a single address namespace; voting shares either
  // candidates (CastVote, kind 0) or delegates (TransferVote, kind 1).
  const bool voting = spec.contract == Contract::kVoting;
  const bool cast_only = voting && (hub || spec.target_degree > 0.5);
  std::vector<std::uint8_t> kinds(n, 0);
  std::vector<std::uint8_t> op(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (voting) {
      kinds[i] = cast_only ? 0 : (rng.chance(0.8) ? 0 : 1);
      op[i] = kinds[i];
    } else {
      op[i] = static_cast<std::uint8_t>(rng.below(3));  // deposit, withdraw, transfer
    }
  }
  Groups groups(kinds);

  if (hub) {
    for (std::uint32_t i = 1; i < n; ++i) groups.move(i, 0);
  } else if (n >= 2 && spec.target_degree > 0.0) {
    const double target = spec.target_degree * pairs;
    const double tol = spec.tolerance * pairs;
    // Aim well inside the band; the full tolerance only applies once the
    // budget runs out.
    const double aim = tol / 4;
    const std::uint64_t budget = 400 * static_cast<std::uint64_t>(n) + 1'000'000;
    std::uint64_t it = 0;
    while (std::abs(static_cast<double>(groups.edges) - target) > aim) {
      if (++it > budget) {
        if (std::abs(static_cast<double>(groups.edges) - target) <= tol) break;
        const double got = static_cast<double>(groups.edges) / pairs;
        throw WorkloadError("target degree " + std::to_string(spec.target_degree) +
                                " not reached; achieved " + std::to_string(got),
                            got);
      }
      const auto i = static_cast<std::uint32_t>(rng.below(n));
      const double gap = target - static_cast<double>(groups.edges);
      std::uint32_t g;
      if (gap > 0) {
        // Join the group of a random transaction of the same kind.
        const auto j = static_cast<std::uint32_t>(rng.below(n));
        if (kinds[j] != kinds[i]) continue;
        g = groups.group_of[j];
      } else {
        // Back to its own private address, if nobody else uses it.
        if (groups.group_of[i] == i || groups.size[i] != 0) continue;
        g = i;
      }
      const double after = static_cast<double>(groups.edges) + static_cast<double>(groups.delta(i, g));
      if (std::abs(after - target) < std::abs(static_cast<double>(groups.edges) - target)) groups.move(i, g);
    }
  }

  Workload w;
  KeyedDigestSigner signer;
  std::set<std::string> accounts, voters, candidates;
  for (std::uint32_t i = 0; i < n; ++i) {
    Transaction tx;
    tx.tx_id = i;
    const std::uint32_t g = groups.group_of[i];
    if (voting) {
      const std::string voter = "v" + std::to_string(i);
      voters.insert(voter);
      if (op[i] == 0) {
        const std::string cand = "c" + std::to_string(g);
        candidates.insert(cand);
        tx.call = call::CastVote{voter, cand};
      } else {
        const std::string to = "d" + std::to_string(g);
        voters.insert(to);
        tx.call = call::TransferVote{voter, to};
      }
    } else {
      const std::string client = wallet_client(g);
      const std::string key = wallet_key(g, 'a');
      accounts.insert(client + "/" + key);
      const std::uint64_t amount = static_cast<std::uint64_t>(rng.between(1, 100));
      if (op[i] == 0) {
        tx.call = call::Deposit{client, key, amount};
      } else if (op[i] == 1) {
        tx.call = call::Withdraw{client, key, amount};
      } else {
        const std::string from_client = wallet_client(i);
        const std::string from_key = wallet_key(i, 'p');
        accounts.insert(from_client + "/" + from_key);
        tx.call = call::Transfer{from_client, from_key, client, key, amount};
      }
    }
    tx.expiry = kExpiry;
    tx.submitter = Bytes{'c', 'l', 'i'};
    signer.sign(tx);
    w.txs.push_back(std::move(tx));
  }

  // Setup transactions in a fixed order, executed serially to get the
  // genesis state.
  auto add_setup = [&](ContractCall call) {
    Transaction tx;
    tx.tx_id = static_cast<TxId>(w.setup.size());
    tx.call = std::move(call);
    tx.expiry = kExpiry;
    tx.submitter = Bytes{'s', 'e', 't'};
    signer.sign(tx);
    w.setup.push_back(std::move(tx));
  };
  for (const auto& v : voters) add_setup(call::RegisterVoter{v});
  for (const auto& c : candidates) add_setup(call::RegisterCandidate{c});
  for (const auto& a : accounts) {
    const auto slash = a.find('/');
    add_setup(call::Deposit{a.substr(0, slash), a.substr(slash + 1), kOpeningBalance});
  }
  MapStateView view;
  for (const auto& tx : w.setup) {
    auto r = execute(tx.call, view);
    if (auto* d = std::get_if<StateDelta>(&r)) {
      view.apply(*d);
      w.genesis.merge(*d);
    } else {
      throw std::logic_error("setup transaction failed");
    }
  }
  w.edges = groups.edges;
  w.degree = pairs > 0 ? static_cast<double>(groups.edges) / pairs : 0.0;
  return w;
}

Block make_block(std::vector<Transaction> txs, std::uint64_t height) {
  Block b;
  b.height = height;
  for (std::size_t i = 0; i < txs.size(); ++i) txs[i].tx_id = static_cast<TxId>(i);
  b.txs = std::move(txs);
  return b;
}

}  // namespace ibex::bench
