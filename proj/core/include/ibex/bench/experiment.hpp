// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ibex/bench/baselines.hpp"
#include "ibex/bench/merkle_bench.hpp"
#include "ibex/cluster/config.hpp"

namespace ibex::bench {

// Cells are the cross product of every axis. Conflict values are fractions.
struct ExperimentMatrix {
  std::vector<Contract> contracts{Contract::kWallet};
  std::vector<std::size_t> threads{4};
  std::vector<double> conflicts{0.0};
  std::vector<std::size_t> txns{1000};
  std::vector<std::size_t> clusters{3};
  std::vector<std::size_t> crashes{0};
  std::vector<Mode> modes{Mode::kSingle, Mode::kMulti, Mode::kCluster};
  std::uint64_t seed = 1;
  cluster::ClusterConfig base;

  std::size_t cell_count() const;
};

struct ExperimentRow {
  Mode mode = Mode::kSingle;
  Contract contract = Contract::kWallet;
  std::size_t threads = 0;
  std::size_t tx_count = 0;
  double conflict = 0;
  std::size_t cluster = 0;
  std::size_t crashes = 0;
  PhaseTimings timings;
  Digest root{};
  std::string status;
  std::uint64_t state_bytes = 0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  bool ok = true;
  std::string report;  // set when a cell's roots disagree
};

// Crash cells inject `crashes` follower crashes during execution and only
// emit a cluster row; the single-core root still serves as reference.
ExperimentResult run_experiment(const ExperimentMatrix& m,
                                const std::function<void(const ExperimentRow&)>& progress = {});

// JSON object with optional arrays "contracts", "threads", "conflict_pct",
// "txns", "clusters", "crashes", "modes" and scalars "seed", "transport".
ExperimentMatrix parse_matrix_json(std::string_view text, ExperimentMatrix base = {});
ExperimentMatrix load_matrix(const std::filesystem::path& path, ExperimentMatrix base = {});

// Named matrices mirroring the published sweeps: "conflict", "threads",
// "txns", "cluster", "crash".
ExperimentMatrix preset(std::string_view name);
std::vector<std::string> preset_names();

void write_results_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_breakdown_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_plot_dat(std::ostream& out, const std::vector<ExperimentRow>& rows);

struct MerkleRow {
  double read_pct = 0;
  MerkleBenchResult result;
};

// Read-percentage sweep 0..100 step `step`.
std::vector<MerkleRow> merkle_read_sweep(MerkleBenchSpec spec, std::size_t parallelism, double step = 20);
void write_merkle_csv(std::ostream& out, const std::vector<MerkleRow>& rows);

}  // namespace ibex::bench
