// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "ibex/common/codec.hpp"
#include "ibex/common/hash.hpp"
#include "ibex/domain/types.hpp"

namespace ibex {

void encode_call(Writer& w, const ContractCall& call);
ContractCall decode_call(Reader& r);
Bytes encode_call(const ContractCall& call);

void encode_tx(Writer& w, const Transaction& tx);
Transaction decode_tx(Reader& r);

Bytes canonical_encode(const Block& block);
Block decode_block(ByteView bytes);

Digest block_hash(const Block& block, HashId hash = HashId::kSha256);

Bytes encode_delta(const StateDelta& delta);
StateDelta decode_delta(ByteView bytes);
Digest delta_digest(const StateDelta& delta, HashId hash = HashId::kSha256);

}  // namespace ibex
