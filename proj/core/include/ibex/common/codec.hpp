// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ibex/common/bytes.hpp"

namespace ibex {

// Canonical wire encoding: integers are 8-byte big-endian, byte strings
// carry a 4-byte big-endian length prefix, lists a 4-byte count prefix.
class Writer {
public:
  void u64(std::uint64_t v) { put_u64(buf_, v); }
  void count(std::size_t n);
  void bytes(ByteView b);
  void bytes(std::string_view s) { bytes(as_bytes(s)); }
  void digest(const Digest& d) { bytes(ByteView{d.data(), d.size()}); }

  const Bytes& data() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

private:
  Bytes buf_;
};

class Reader {
public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint64_t u64();
  std::uint32_t count();
  Bytes bytes();
  std::string str();
  Digest digest();

  bool done() const { return pos_ == data_.size(); }
  // Throws unless every byte was consumed.
  void expect_done() const;

private:
  void need(std::size_t n) const;

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace ibex
