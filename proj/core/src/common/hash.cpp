// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/common/hash.hpp"

// The low-level SHA256_* calls avoid EVP context allocation per hash.
#pragma GCC diagnostic ignored "-Wdeprecated-declarations"
#include <openssl/sha.h>

#include <stdexcept>
#include <string>

namespace ibex {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TestMix {
  std::uint64_t lanes[4] = {0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL, 0x3c6ef372fe94f82bULL,
                            0xa54ff53a5f1d36f1ULL};
  std::uint64_t length = 0;

  void update(ByteView data) {
    for (std::uint8_t b : data) {
      const std::size_t lane = length & 3;
      lanes[lane] = mix64(lanes[lane] ^ (std::uint64_t{b} + (length << 8)));
      ++length;
    }
  }

  Digest finish() {
    Digest out;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t v = mix64(lanes[i] ^ mix64(length + static_cast<std::uint64_t>(i)) ^
                                    lanes[(i + 1) & 3]);
      for (int j = 0; j < 8; ++j) out[i * 8 + j] = static_cast<std::uint8_t>(v >> (56 - 8 * j));
    }
    return out;
  }
};

}  // namespace

std::string_view hash_name(HashId id) {
  switch (id) {
    case HashId::kSha256: return "sha256";
    case HashId::kTestMix: return "testmix";
  }
  return "unknown";
}

HashId parse_hash_id(std::string_view name) {
  if (name == "sha256") return HashId::kSha256;
  if (name == "testmix") return HashId::kTestMix;
  throw std::invalid_argument("unknown hash id: " + std::string(name));
}

Digest hash256(HashId id, ByteView data) { return hash256(id, data, {}, {}); }

Digest hash256(HashId id, ByteView a, ByteView b, ByteView c) {
  if (id == HashId::kTestMix) {
    TestMix m;
    m.update(a);
    m.update(b);
    m.update(c);
    return m.finish();
  }
  SHA256_CTX ctx;
  SHA256_Init(&ctx);
  SHA256_Update(&ctx, a.data(), a.size());
  SHA256_Update(&ctx, b.data(), b.size());
  SHA256_Update(&ctx, c.data(), c.size());
  Digest out;
  SHA256_Final(out.data(), &ctx);
  return out;
}

}  // namespace ibex
