// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/common/bytes.hpp"

#include <limits>

#include "ibex/common/codec.hpp"

namespace ibex {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_nibble(hex[i]);
    const int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  const Bytes b = from_hex(hex);
  if (b.size() != 32) throw DecodeError("digest must be 32 bytes");
  Digest d;
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

Bytes encode_u64_value(std::uint64_t v) {
  Bytes out;
  out.reserve(8);
  put_u64(out, v);
  return out;
}

std::uint64_t decode_u64_value(ByteView value) {
  if (value.size() != 8) throw DecodeError("contract value must be 8 bytes");
  return get_u64(value.data());
}

void Writer::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("list too long to encode");
  put_u32(buf_, static_cast<std::uint32_t>(n));
}

void Writer::bytes(ByteView b) {
  count(b.size());
  buf_.insert(buf_.end(), b.begin(), b.end());
}

void Reader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) throw DecodeError("truncated input");
}

std::uint64_t Reader::u64() {
  need(8);
  const std::uint64_t v = get_u64(data_.data() + pos_);
  pos_ += 8;
  return v;
}

std::uint32_t Reader::count() {
  need(4);
  const std::uint32_t v = get_u32(data_.data() + pos_);
  pos_ += 4;
  return v;
}

Bytes Reader::bytes() {
  const std::uint32_t n = count();
  need(n);
  Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
            data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

std::string Reader::str() {
  const std::uint32_t n = count();
  need(n);
  std::string out(reinterpret_cast<const char*>(data_.data() + pos_), n);
  pos_ += n;
  return out;
}

Digest Reader::digest() {
  const std::uint32_t n = count();
  if (n != 32) throw DecodeError("digest length must be 32");
  need(32);
  Digest d;
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(pos_), 32, d.begin());
  pos_ += 32;
  return d;
}

void Reader::expect_done() const {
  if (!done()) throw DecodeError("trailing bytes after encoded value");
}

}  // namespace ibex
