// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ibex/domain/types.hpp"

namespace ibex::dag {

// Largest block stored as a dense bit matrix; larger blocks use per-row
// sorted successor lists.
inline constexpr std::size_t kDenseLimit = 8192;

enum class Representation { kAuto, kDense, kSparse };

// Acyclic conflict graph over a block. Edges only run from a lower tx id to a
// higher one, so 0..n-1 is always a topological order.
class DependencyGraph {
public:
  DependencyGraph() = default;

  std::size_t size() const { return n_; }
  std::uint64_t edge_count() const { return edge_count_; }
  const std::vector<std::uint32_t>& indegree() const { return indegree_; }
  bool dense() const { return dense_; }

  bool has_edge(TxId from, TxId to) const;

  template <typename Fn>
  void for_each_successor(TxId from, Fn&& fn) const {
    if (dense_) {
      const std::uint64_t* row = rows_.data() + std::size_t{from} * words_;
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
          const int b = __builtin_ctzll(bits);
          fn(static_cast<TxId>(w * 64 + static_cast<std::size_t>(b)));
          bits &= bits - 1;
        }
      }
    } else {
      for (TxId to : succ_[from]) fn(to);
    }
  }

  std::vector<TxId> successors(TxId from) const;

  // Sorted (from, to) pairs.
  std::vector<std::pair<TxId, TxId>> edges() const;

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b);

private:
  friend class GraphBuilder;

  std::size_t n_ = 0;
  bool dense_ = true;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::vector<TxId>> succ_;
  std::vector<std::uint32_t> indegree_;
  std::uint64_t edge_count_ = 0;
};

// Interned read/touch/write address ids for one transaction.
struct TxAccess {
  std::vector<std::uint32_t> writes;   // sorted
  std::vector<std::uint32_t> touches;  // reads ∪ writes, sorted
};

std::vector<TxAccess> intern_footprints(std::span<const Transaction> txs);

// True iff the two accesses conflict (RW, WR or WW overlap).
bool conflicts(const TxAccess& a, const TxAccess& b);

// Edge i->j (i<j) iff the footprints of i and j conflict. The result does
// not depend on parallelism.
DependencyGraph build_graph(std::span<const Transaction> txs, std::size_t parallelism,
                            Representation rep = Representation::kAuto);

// Builds a graph from an explicit edge list (tests and tools).
DependencyGraph graph_from_edges(std::size_t n, std::span<const std::pair<TxId, TxId>> edges,
                                 Representation rep = Representation::kAuto);

// edge_count / (n(n-1)/2). Throws std::invalid_argument if n < 2.
double dependency_degree(const DependencyGraph& g);
double dependency_degree(std::uint64_t edge_count, std::size_t n);

}  // namespace ibex::dag
