// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <atomic>

#include "ibex/common/codec.hpp"
#include "ibex/common/hash.hpp"
#include "ibex/common/parallel.hpp"
#include "ibex/common/rng.hpp"

namespace ibex {
namespace {

TEST(Bytes, HexRoundTrip) {
  const Bytes b{0x00, 0x7f, 0xff, 0x10};
  EXPECT_EQ(to_hex(b), "007fff10");
  EXPECT_EQ(from_hex("007FFF10"), b);
  EXPECT_THROW(from_hex("abc"), DecodeError);
  EXPECT_THROW(from_hex("zz"), DecodeError);
}

TEST(Bytes, U64ValueIsBigEndian) {
  EXPECT_EQ(to_hex(encode_u64_value(0x0102)), "0000000000000102");
  EXPECT_EQ(decode_u64_value(encode_u64_value(987654321)), 987654321u);
  EXPECT_THROW(decode_u64_value(Bytes{1, 2, 3}), DecodeError);
}

TEST(Codec, WriterLayout) {
  Writer w;
  w.u64(1);
  w.bytes(std::string_view("ab"));
  w.count(3);
  EXPECT_EQ(to_hex(w.data()), "0000000000000001" "000000026162" "00000003");
}

TEST(Codec, ReaderRejectsTruncationAndTrailingBytes) {
  Writer w;
  w.bytes(std::string_view("hello"));
  Bytes b = std::move(w).take();
  {
    Reader r(b);
    EXPECT_EQ(r.str(), "hello");
    EXPECT_NO_THROW(r.expect_done());
  }
  Bytes shorter(b.begin(), b.end() - 1);
  Reader r2(shorter);
  EXPECT_THROW(r2.str(), DecodeError);
  b.push_back(0);
  Reader r3(b);
  r3.str();
  EXPECT_THROW(r3.expect_done(), DecodeError);
}

TEST(Hash, Sha256KnownVector) {
  EXPECT_EQ(to_hex(sha256(as_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, ConcatenatedPartsMatchSingleBuffer) {
  for (HashId id : {HashId::kSha256, HashId::kTestMix}) {
    EXPECT_EQ(hash256(id, as_bytes("ab"), as_bytes("cd"), as_bytes("e")), hash256(id, as_bytes("abcde")));
  }
  EXPECT_NE(hash256(HashId::kTestMix, as_bytes("x")), hash256(HashId::kTestMix, as_bytes("y")));
  EXPECT_EQ(parse_hash_id(hash_name(HashId::kTestMix)), HashId::kTestMix);
}

TEST(Rng, SeededAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const auto v = r.between(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    const double u = r.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, ChunksCoverRangeOnce) {
  std::vector<std::atomic<int>> hits(1000);
  run_chunked(hits.size(), 7, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) hits[i]++;
  });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(run_chunked(100, 4,
                           [](std::size_t w, std::size_t, std::size_t) {
                             if (w == 2) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

}  // namespace
}  // namespace ibex
