// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/block_producer.hpp"

#include <limits>
#include <stdexcept>

namespace ibex::cluster {

std::string_view drop_reason_name(DropReason r) {
  return r == DropReason::kExpired ? "expired" : "bad-signature";
}

Block produce_block(TxPool& pool, std::size_t max_txs, std::uint64_t height, const Digest& parent_hash,
                    NodeId producer, const SignatureVerifier& verifier, std::vector<DroppedTx>* drop_log) {
  if (max_txs == 0) throw std::invalid_argument("max_txs must be positive");
  if (max_txs > std::numeric_limits<TxId>::max()) throw std::invalid_argument("max_txs too large");
  Block block;
  block.height = height;
  block.parent_hash = parent_hash;
  block.producer_id = producer;
  for (auto& tx : pool.pop_up_to(max_txs)) {
    std::optional<DropReason> reason;
    if (!verifier.verify(tx)) {
      reason = DropReason::kBadSignature;
    } else if (tx.expiry < height) {
      reason = DropReason::kExpired;
    }
    if (reason) {
      if (drop_log) drop_log->push_back({std::move(tx), *reason});
      continue;
    }
    tx.tx_id = static_cast<TxId>(block.txs.size());
    block.txs.push_back(std::move(tx));
  }
  return block;
}

}  // namespace ibex::cluster
