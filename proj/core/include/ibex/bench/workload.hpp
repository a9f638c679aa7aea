// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex::bench {

class WorkloadError : public std::runtime_error {
public:
  WorkloadError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

private:
  double achieved_;
};

std::string_view contract_name(Contract c);
Contract parse_contract(std::string_view s);

struct WorkloadSpec {
  Contract contract = Contract::kWallet;
  std::size_t tx_count = 1000;
  double target_degree = 0.0;
  std::uint64_t seed = 1;
  double tolerance = 0.002;
};

struct Workload {
  // Registrations and opening deposits, applied before the measured block.
  std::vector<Transaction> setup;
  StateDelta genesis;
  std::vector<Transaction> txs;
  std::uint64_t edges = 0;
  double degree = 0.0;
};

// Every transaction writes one shareable address (plus a private one for
// two-party calls). Conflicts are introduced by moving transactions onto
// another transaction's shareable address until the edge count is within
// tolerance of the target. Deterministic in the spec.
Workload generate_workload(const WorkloadSpec& spec);

Block make_block(std::vector<Transaction> txs, std::uint64_t height = 1);

}  // namespace ibex::bench
