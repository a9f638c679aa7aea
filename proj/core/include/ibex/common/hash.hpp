// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string_view>

#include "ibex/common/bytes.hpp"

namespace ibex {

enum class HashId : std::uint8_t {
  kSha256 = 0,
  // Cheap non-cryptographic 256-bit mixer. Deterministic; for tests only.
  kTestMix = 1,
};

std::string_view hash_name(HashId id);
HashId parse_hash_id(std::string_view name);

Digest hash256(HashId id, ByteView data);
inline Digest sha256(ByteView data) { return hash256(HashId::kSha256, data); }

// Hash of the concatenation of up to three parts without building a buffer.
Digest hash256(HashId id, ByteView a, ByteView b, ByteView c = {});

}  // namespace ibex
