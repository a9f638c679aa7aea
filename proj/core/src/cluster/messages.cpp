// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/cluster/messages.hpp"

#include <limits>

#include "ibex/common/codec.hpp"

namespace ibex::cluster {

namespace {

bool read_flag(Reader& r) {
  const auto v = r.u64();
  if (v > 1) throw DecodeError("flag out of range");
  return v == 1;
}

ComponentId read_component(Reader& r) {
  const auto v = r.u64();
  if (v > std::numeric_limits<ComponentId>::max()) throw DecodeError("component id out of range");
  return static_cast<ComponentId>(v);
}

TxId read_tx(Reader& r) {
  const auto v = r.u64();
  if (v > std::numeric_limits<TxId>::max()) throw DecodeError("tx id out of range");
  return static_cast<TxId>(v);
}

}  // namespace

Bytes encode(const BlockAnnounce& m) {
  Writer w;
  w.u64(m.height);
  w.u64(m.validation ? 1 : 0);
  w.bytes(m.block);
  w.count(m.components.size());
  for (const auto& c : m.components) {
    w.count(c.size());
    for (TxId t : c) w.u64(t);
  }
  return std::move(w).take();
}

BlockAnnounce decode_announce(ByteView b) {
  Reader r(b);
  BlockAnnounce m;
  m.height = r.u64();
  m.validation = read_flag(r);
  m.block = r.bytes();
  m.components.resize(r.count());
  for (auto& c : m.components) {
    c.resize(r.count());
    for (auto& t : c) t = read_tx(r);
  }
  r.expect_done();
  return m;
}

Bytes encode(const ComponentAssign& m) {
  Writer w;
  w.u64(m.height);
  w.u64(m.version);
  w.count(m.owners.size());
  for (const auto& [c, n] : m.owners) {
    w.u64(c);
    w.u64(n);
  }
  return std::move(w).take();
}

ComponentAssign decode_assign(ByteView b) {
  Reader r(b);
  ComponentAssign m;
  m.height = r.u64();
  m.version = r.u64();
  m.owners.resize(r.count());
  for (auto& [c, n] : m.owners) {
    c = read_component(r);
    n = r.u64();
  }
  r.expect_done();
  return m;
}

Bytes encode(const Control& m) {
  Writer w;
  w.u64(m.height);
  w.u64(static_cast<std::uint64_t>(m.kind));
  w.digest(m.root);
  return std::move(w).take();
}

Control decode_control(ByteView b) {
  Reader r(b);
  Control m;
  m.height = r.u64();
  const auto k = r.u64();
  if (k > static_cast<std::uint64_t>(ControlKind::kCommit)) throw DecodeError("unknown control kind");
  m.kind = static_cast<ControlKind>(k);
  m.root = r.digest();
  r.expect_done();
  return m;
}

Bytes encode(const ComponentDone& m) {
  Writer w;
  w.u64(m.height);
  w.u64(m.component);
  return std::move(w).take();
}

ComponentDone decode_done(ByteView b) {
  Reader r(b);
  ComponentDone m;
  m.height = r.u64();
  m.component = read_component(r);
  r.expect_done();
  return m;
}

Bytes encode(const StateDeltaShip& m) {
  Writer w;
  w.u64(m.height);
  w.u64(m.from);
  w.u64(m.merged ? 1 : 0);
  w.count(m.components.size());
  for (ComponentId c : m.components) w.u64(c);
  w.bytes(m.delta);
  return std::move(w).take();
}

StateDeltaShip decode_ship(ByteView b) {
  Reader r(b);
  StateDeltaShip m;
  m.height = r.u64();
  m.from = r.u64();
  m.merged = read_flag(r);
  m.components.resize(r.count());
  for (auto& c : m.components) c = read_component(r);
  m.delta = r.bytes();
  r.expect_done();
  return m;
}

Bytes encode(const Halt& m) {
  Writer w;
  w.u64(m.height);
  w.bytes(as_bytes(m.reason));
  return std::move(w).take();
}

Halt decode_halt(ByteView b) {
  Reader r(b);
  Halt m;
  m.height = r.u64();
  m.reason = r.str();
  r.expect_done();
  return m;
}

}  // namespace ibex::cluster
