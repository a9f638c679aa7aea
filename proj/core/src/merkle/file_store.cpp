// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <unistd.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <mutex>

#include "ibex/merkle/store.hpp"

namespace ibex::merkle {

namespace {

constexpr char kSegmentMagic[4] = {'I', 'X', 'S', 'G'};
constexpr char kRootMagic[4] = {'I', 'X', 'R', 'R'};
constexpr std::size_t kSegmentHeader = 8;
constexpr std::size_t kRootRegisterSize = 4 + 4 + 32 + 8;

Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError("cannot open " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

Bytes segment_header() {
  Bytes h(kSegmentMagic, kSegmentMagic + 4);
  put_u32(h, FileStore::kVersion);
  return h;
}

}  // namespace

FileStore::FileStore(std::filesystem::path dir, bool sync) : dir_(std::move(dir)), sync_(sync) {
  std::filesystem::create_directories(dir_);
  recover();
}

FileStore::~FileStore() {
  if (segment_) std::fclose(segment_);
}

void FileStore::recover() {
  const auto seg_path = dir_ / "nodes.seg";
  const auto reg_path = dir_ / "root.reg";
  committed_len_ = kSegmentHeader;
  if (std::filesystem::exists(reg_path)) {
    const Bytes reg = read_file(reg_path);
    if (reg.size() != kRootRegisterSize || std::memcmp(reg.data(), kRootMagic, 4) != 0) {
      throw StoreError("corrupt root register in " + dir_.string());
    }
    if (get_u32(reg.data() + 4) != kVersion) throw StoreError("unsupported root register version");
    Digest root;
    std::copy_n(reg.begin() + 8, 32, root.begin());
    root_ = root;
    committed_len_ = get_u64(reg.data() + 40);
  }

  if (std::filesystem::exists(seg_path)) {
    const Bytes seg = read_file(seg_path);
    if (seg.size() < kSegmentHeader || std::memcmp(seg.data(), kSegmentMagic, 4) != 0) {
      throw StoreError("corrupt segment header in " + dir_.string());
    }
    if (get_u32(seg.data() + 4) != kVersion) throw StoreError("unsupported segment version");
    if (seg.size() < committed_len_) throw StoreError("segment shorter than committed length");
    std::size_t pos = kSegmentHeader;
    while (pos < committed_len_) {
      if (committed_len_ - pos < 9) throw StoreError("truncated segment record");
      const std::uint32_t len = get_u32(seg.data() + pos);
      if (len < 5 || committed_len_ - pos - 4 < len) throw StoreError("bad segment record length");
      const NodePath path{seg[pos + 4], get_u32(seg.data() + pos + 5)};
      index_[path.key()] = Bytes(seg.begin() + static_cast<std::ptrdiff_t>(pos + 9),
                                 seg.begin() + static_cast<std::ptrdiff_t>(pos + 4 + len));
      pos += 4 + len;
    }
    // Drop records of an apply that never reached its root register write.
    std::filesystem::resize_file(seg_path, committed_len_);
  } else {
    std::ofstream out(seg_path, std::ios::binary);
    const Bytes h = segment_header();
    out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
  }

  segment_ = std::fopen(seg_path.c_str(), "ab");
  if (!segment_) throw StoreError("cannot open segment " + seg_path.string());
}

std::optional<Bytes> FileStore::get(NodePath path) const {
  std::shared_lock lock(mu_);
  const auto it = index_.find(path.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Digest> FileStore::root() const {
  std::shared_lock lock(mu_);
  return root_;
}

std::size_t FileStore::node_count() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

void FileStore::write_root_register(const Digest& root, std::uint64_t committed_len) {
  Bytes reg(kRootMagic, kRootMagic + 4);
  put_u32(reg, kVersion);
  reg.insert(reg.end(), root.begin(), root.end());
  put_u64(reg, committed_len);
  const auto tmp = dir_ / "root.reg.tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw StoreError("cannot write root register");
  const bool ok = std::fwrite(reg.data(), 1, reg.size(), f) == reg.size() && std::fflush(f) == 0 &&
                  (!sync_ || ::fsync(fileno(f)) == 0);
  std::fclose(f);
  if (!ok) throw StoreError("root register write failed");
  std::filesystem::rename(tmp, dir_ / "root.reg");
}

void FileStore::apply(const WriteBatch& batch, const Digest& root) {
  std::unique_lock lock(mu_);
  Bytes buf;
  for (const auto& [path, bytes] : batch) {
    put_u32(buf, static_cast<std::uint32_t>(bytes.size() + 5));
    buf.push_back(path.level);
    put_u32(buf, path.index);
    buf.insert(buf.end(), bytes.begin(), bytes.end());
  }
  const std::uint64_t new_len = committed_len_ + buf.size();
  try {
    if (std::fwrite(buf.data(), 1, buf.size(), segment_) != buf.size() || std::fflush(segment_) != 0 ||
        (sync_ && ::fsync(fileno(segment_)) != 0)) {
      throw StoreError("segment append failed");
    }
    write_root_register(root, new_len);
  } catch (...) {
    std::fflush(segment_);
    if (::ftruncate(fileno(segment_), static_cast<off_t>(committed_len_)) != 0) {
      throw StoreError("segment append failed and could not be rolled back");
    }
    throw;
  }
  committed_len_ = new_len;
  for (const auto& [path, bytes] : batch) index_[path.key()] = bytes;
  root_ = root;
}

}  // namespace ibex::merkle
