// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>

#include "ibex/domain/types.hpp"

namespace ibex {

class SignatureVerifier {
public:
  virtual ~SignatureVerifier() = default;
  virtual bool verify(const Transaction& tx) const = 0;
};

// Keyed SHA-256 over the canonical call encoding. Deterministic and needs no
// key infrastructure; stands in for a real signature scheme.
class KeyedDigestSigner : public SignatureVerifier {
public:
  explicit KeyedDigestSigner(std::string key = "ibex-harness-key") : key_(std::move(key)) {}

  Bytes sign(const ContractCall& call) const;
  void sign(Transaction& tx) const { tx.signature = sign(tx.call); }
  bool verify(const Transaction& tx) const override;

private:
  std::string key_;
};

}  // namespace ibex
