// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ibex/common/bytes.hpp"
#include "ibex/merkle/layout.hpp"

namespace ibex::merkle {

class StoreError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using WriteBatch = std::vector<std::pair<NodePath, Bytes>>;

// Persistent node store with a root-hash register. apply() publishes a batch
// of node writes together with the new root; readers see either all of it or
// none of it.
class NodeStore {
public:
  virtual ~NodeStore() = default;

  virtual std::optional<Bytes> get(NodePath path) const = 0;
  // Absent until the first apply().
  virtual std::optional<Digest> root() const = 0;
  virtual void apply(const WriteBatch& batch, const Digest& root) = 0;
  virtual std::size_t node_count() const = 0;
};

class MemoryStore : public NodeStore {
public:
  std::optional<Bytes> get(NodePath path) const override;
  std::optional<Digest> root() const override;
  void apply(const WriteBatch& batch, const Digest& root) override;
  std::size_t node_count() const override;

  // The next `n` apply() calls fail with StoreError before touching state.
  void fail_next_applies(int n) { fail_budget_.store(n); }
  std::uint64_t apply_count() const { return applies_.load(); }

private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::uint64_t, Bytes> nodes_;
  std::optional<Digest> root_;
  std::atomic<int> fail_budget_{0};
  std::atomic<std::uint64_t> applies_{0};
};

// Append-only segment file plus a separately replaced root register.
//
//   nodes.seg : "IXSG" version:u32, then records len:u32 (level:u8
//               index:u32 node-bytes). len counts the 5 path bytes.
//   root.reg  : "IXRR" version:u32 root[32] committed_len:u64
//
// root.reg is replaced by rename after the batch is flushed, so the segment
// bytes past committed_len belong to an unfinished apply and are truncated
// when the store is reopened. Node bytes are also indexed in memory.
class FileStore : public NodeStore {
public:
  static constexpr std::uint32_t kVersion = 1;

  explicit FileStore(std::filesystem::path dir, bool sync = false);
  ~FileStore() override;
  FileStore(const FileStore&) = delete;
  FileStore& operator=(const FileStore&) = delete;

  std::optional<Bytes> get(NodePath path) const override;
  std::optional<Digest> root() const override;
  void apply(const WriteBatch& batch, const Digest& root) override;
  std::size_t node_count() const override;

  const std::filesystem::path& dir() const { return dir_; }
  std::uint64_t segment_bytes() const { return committed_len_; }

private:
  void recover();
  void write_root_register(const Digest& root, std::uint64_t committed_len);

  std::filesystem::path dir_;
  bool sync_;
  std::FILE* segment_ = nullptr;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::uint64_t, Bytes> index_;
  std::optional<Digest> root_;
  std::uint64_t committed_len_ = 0;
};

}  // namespace ibex::merkle
