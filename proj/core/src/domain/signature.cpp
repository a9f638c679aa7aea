// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/domain/signature.hpp"

#include "ibex/common/hash.hpp"
#include "ibex/domain/encoding.hpp"

namespace ibex {

Bytes KeyedDigestSigner::sign(const ContractCall& call) const {
  const Bytes enc = encode_call(call);
  const Digest d = hash256(HashId::kSha256, as_bytes(key_), enc);
  return Bytes(d.begin(), d.end());
}

bool KeyedDigestSigner::verify(const Transaction& tx) const { return tx.signature == sign(tx.call); }

}  // namespace ibex
