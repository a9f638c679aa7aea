// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string_view>
#include <vector>

#include "ibex/cluster/tx_pool.hpp"
#include "ibex/domain/signature.hpp"
#include "ibex/domain/types.hpp"

namespace ibex::cluster {

enum class DropReason : std::uint8_t { kBadSignature, kExpired };

std::string_view drop_reason_name(DropReason r);

struct DroppedTx {
  Transaction tx;  // as submitted
  DropReason reason = DropReason::kBadSignature;
};

// Dequeues up to max_txs, filters out transactions with a bad signature or
// an expiry below `height`, and numbers the survivors 0..n-1. The state
// root is left zero.
Block produce_block(TxPool& pool, std::size_t max_txs, std::uint64_t height, const Digest& parent_hash,
                    NodeId producer, const SignatureVerifier& verifier, std::vector<DroppedTx>* drop_log);

}  // namespace ibex::cluster
