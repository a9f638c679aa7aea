// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/dag/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "ibex/domain/contracts.hpp"

namespace ibex::dag {

namespace {

bool intersects(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool use_dense(std::size_t n, Representation rep) {
  switch (rep) {
    case Representation::kDense: return true;
    case Representation::kSparse: return false;
    case Representation::kAuto: break;
  }
  return n <= kDenseLimit;
}

// Row boundaries giving each worker roughly the same number of (i, j>i) pairs.
std::vector<std::size_t> balanced_rows(std::size_t n, std::size_t workers) {
  std::vector<std::size_t> bounds{0};
  const double total = static_cast<double>(n) * static_cast<double>(n - (n > 0 ? 1 : 0)) / 2.0;
  const double per = total / static_cast<double>(workers);
  double acc = 0;
  for (std::size_t i = 0; i < n && bounds.size() < workers; ++i) {
    acc += static_cast<double>(n - 1 - i);
    if (acc >= per * static_cast<double>(bounds.size())) bounds.push_back(i + 1);
  }
  while (bounds.size() <= workers) bounds.push_back(n);
  bounds.back() = n;
  for (std::size_t k = 1; k < bounds.size(); ++k) bounds[k] = std::max(bounds[k], bounds[k - 1]);
  return bounds;
}

}  // namespace

class GraphBuilder {
public:
  GraphBuilder(std::size_t n, bool dense) {
    g_.n_ = n;
    g_.dense_ = dense;
    g_.words_ = (n + 63) / 64;
    if (dense) {
      g_.rows_.assign(n * g_.words_, 0);
    } else {
      g_.succ_.resize(n);
    }
    g_.indegree_.assign(n, 0);
  }

  // Only the owner of row `from` may call this.
  void add(TxId from, TxId to) {
    if (g_.dense_) {
      g_.rows_[std::size_t{from} * g_.words_ + to / 64] |= std::uint64_t{1} << (to % 64);
    } else {
      g_.succ_[from].push_back(to);
    }
  }

  DependencyGraph finish() {
    std::uint64_t edges = 0;
    for (std::size_t i = 0; i < g_.n_; ++i) {
      if (!g_.dense_) {
        auto& s = g_.succ_[i];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
      }
      g_.for_each_successor(static_cast<TxId>(i), [&](TxId to) {
        ++g_.indegree_[to];
        ++edges;
      });
    }
    g_.edge_count_ = edges;
    return std::move(g_);
  }

private:
  DependencyGraph g_;
};

bool DependencyGraph::has_edge(TxId from, TxId to) const {
  if (from >= n_ || to >= n_ || from >= to) return false;
  if (dense_) return (rows_[std::size_t{from} * words_ + to / 64] >> (to % 64)) & 1;
  return std::binary_search(succ_[from].begin(), succ_[from].end(), to);
}

std::vector<TxId> DependencyGraph::successors(TxId from) const {
  std::vector<TxId> out;
  for_each_successor(from, [&](TxId to) { out.push_back(to); });
  return out;
}

std::vector<std::pair<TxId, TxId>> DependencyGraph::edges() const {
  std::vector<std::pair<TxId, TxId>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < n_; ++i) {
    for_each_successor(static_cast<TxId>(i), [&](TxId to) { out.emplace_back(static_cast<TxId>(i), to); });
  }
  return out;
}

bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
  if (a.n_ != b.n_ || a.edge_count_ != b.edge_count_ || a.indegree_ != b.indegree_) return false;
  if (a.dense_ == b.dense_) return a.dense_ ? a.rows_ == b.rows_ : a.succ_ == b.succ_;
  return a.edges() == b.edges();
}

std::vector<TxAccess> intern_footprints(std::span<const Transaction> txs) {
  std::unordered_map<Address, std::uint32_t> ids;
  std::vector<TxAccess> out(txs.size());
  auto id_of = [&](const Address& a) {
    auto [it, inserted] = ids.try_emplace(a, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Footprint fp = footprint(txs[i].call);
    auto& acc = out[i];
    for (const auto& a : fp.writes) acc.writes.push_back(id_of(a));
    for (const auto& a : fp.reads) acc.touches.push_back(id_of(a));
    acc.touches.insert(acc.touches.end(), acc.writes.begin(), acc.writes.end());
    std::sort(acc.writes.begin(), acc.writes.end());
    std::sort(acc.touches.begin(), acc.touches.end());
    acc.touches.erase(std::unique(acc.touches.begin(), acc.touches.end()), acc.touches.end());
  }
  return out;
}

bool conflicts(const TxAccess& a, const TxAccess& b) {
  return intersects(a.writes, b.touches) || intersects(b.writes, a.touches);
}

DependencyGraph build_graph(std::span<const Transaction> txs, std::size_t parallelism,
                            Representation rep) {
  const std::size_t n = txs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (txs[i].tx_id != i) throw std::invalid_argument("tx ids must be contiguous from 0");
  }
  const auto access = intern_footprints(txs);
  GraphBuilder builder(n, use_dense(n, rep));
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, std::max<std::size_t>(n, 1)));
  const auto bounds = balanced_rows(n, workers);

  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (conflicts(access[i], access[j])) builder.add(static_cast<TxId>(i), static_cast<TxId>(j));
      }
    }
  };

  if (workers == 1) {
    fill_rows(0, n);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      if (bounds[w] < bounds[w + 1]) threads.emplace_back(fill_rows, bounds[w], bounds[w + 1]);
    }
    for (auto& t : threads) t.join();
  }
  return builder.finish();
}

DependencyGraph graph_from_edges(std::size_t n, std::span<const std::pair<TxId, TxId>> edges,
                                 Representation rep) {
  GraphBuilder builder(n, use_dense(n, rep));
  for (const auto& [from, to] : edges) {
    if (from >= to || to >= n) throw std::invalid_argument("edges must satisfy from < to < n");
    builder.add(from, to);
  }
  return builder.finish();
}

double dependency_degree(std::uint64_t edge_count, std::size_t n) {
  if (n < 2) throw std::invalid_argument("dependency degree needs at least two transactions");
  const double possible = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(edge_count) / possible;
}

double dependency_degree(const DependencyGraph& g) { return dependency_degree(g.edge_count(), g.size()); }

}  // namespace ibex::dag
