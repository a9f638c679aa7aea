// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/bench/experiment.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ibex/bench/csv.hpp"
#include "ibex/bench/workload.hpp"
#include "json.hpp"

namespace ibex::bench {

std::size_t ExperimentMatrix::cell_count() const {
  return contracts.size() * threads.size() * conflicts.size() * txns.size() * clusters.size() * crashes.size();
}

namespace {

std::string fmt_fraction(double f) {
  std::ostringstream s;
  s << f;
  return s.str();
}

coord::FaultPlan follower_crashes(std::size_t f) {
  coord::FaultPlan plan;
  for (std::size_t i = 0; i < f; ++i) {
    coord::FaultEvent ev;
    ev.target.kind = coord::FaultTarget::Kind::kFollower;
    ev.phase = "execution";
    plan.events.push_back(ev);
  }
  return plan;
}

ExperimentRow make_row(const RunResult& r, Contract c, std::size_t threads, std::size_t txns, double conflict,
                       std::size_t cluster, std::size_t crashes) {
  ExperimentRow row;
  row.mode = r.mode;
  row.contract = c;
  row.threads = threads;
  row.tx_count = txns;
  row.conflict = conflict;
  row.cluster = r.mode == Mode::kCluster ? cluster : 1;
  row.crashes = crashes;
  row.timings = r.timings;
  row.root = r.root;
  row.status = r.status;
  row.state_bytes = r.state_bytes;
  return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentMatrix& m,
                                const std::function<void(const ExperimentRow&)>& progress) {
  ExperimentResult res;
  auto emit = [&](ExperimentRow row) {
    if (progress) progress(row);
    res.rows.push_back(std::move(row));
  };
  std::uint64_t cell = 0;
  for (Contract contract : m.contracts)
    for (std::size_t txns : m.txns)
      for (double conflict : m.conflicts)
        for (std::size_t threads : m.threads)
          for (std::size_t n : m.clusters)
            for (std::size_t f : m.crashes) {
              ++cell;
              const auto w = generate_workload({contract, txns, conflict, m.seed + cell, 0.002});
              const Block block = make_block(w.txs);
              const RunResult single = run_single_core(block, w.genesis, m.base.tree);
              const bool plain = f == 0;
              auto mismatch = [&](const RunResult& r) {
                std::ostringstream s;
                s << "cell " << cell << " (" << contract_name(contract) << ", txns " << txns << ", conflict "
                  << conflict << ", threads " << threads << ", cluster " << n << ", crashes " << f << "): "
                  << mode_name(r.mode) << " root " << to_hex(r.root) << " != single root " << to_hex(single.root);
                res.ok = false;
                res.report = s.str();
              };
              for (Mode mode : m.modes) {
                if (mode == Mode::kSingle && plain) {
                  emit(make_row(single, contract, 1, txns, conflict, n, f));
                } else if (mode == Mode::kMulti && plain) {
                  const RunResult r = run_multi_core(block, w.genesis, threads, m.base.tree);
                  emit(make_row(r, contract, threads, txns, conflict, n, f));
                  if (r.root != single.root) {
                    mismatch(r);
                    return res;
                  }
                } else if (mode == Mode::kCluster) {
                  cluster::ClusterConfig cfg = m.base;
                  cfg.cluster_size = n;
                  cfg.scheduler_threads = threads;
                  cfg.fabric = coord::FabricOptions::direct();
                  const RunResult r = run_cluster_mode(block, w.genesis, cfg, follower_crashes(f), m.seed + cell);
                  emit(make_row(r, contract, threads, txns, conflict, n, f));
                  if (r.status == "diverged" || (r.committed() && r.root != single.root)) {
                    mismatch(r);
                    return res;
                  }
                }
              }
            }
  return res;
}

ExperimentMatrix parse_matrix_json(std::string_view text, ExperimentMatrix m) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("matrix: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("matrix must be a JSON object");
  try {
    if (j.contains("contracts")) {
      m.contracts.clear();
      for (const auto& c : j.at("contracts")) m.contracts.push_back(parse_contract(c.get<std::string>()));
    }
    if (j.contains("modes")) {
      m.modes.clear();
      for (const auto& c : j.at("modes")) m.modes.push_back(parse_mode(c.get<std::string>()));
    }
    if (j.contains("threads")) m.threads = j.at("threads").get<std::vector<std::size_t>>();
    if (j.contains("txns")) m.txns = j.at("txns").get<std::vector<std::size_t>>();
    if (j.contains("clusters")) m.clusters = j.at("clusters").get<std::vector<std::size_t>>();
    if (j.contains("crashes")) m.crashes = j.at("crashes").get<std::vector<std::size_t>>();
    if (j.contains("conflict_pct")) {
      m.conflicts.clear();
      for (double p : j.at("conflict_pct").get<std::vector<double>>()) m.conflicts.push_back(p / 100.0);
    }
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("transport")) m.base.transport = cluster::parse_transport(j.at("transport").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("matrix: ") + e.what());
  }
  if (m.cell_count() == 0 || m.modes.empty()) throw std::invalid_argument("matrix has an empty axis");
  return m;
}

ExperimentMatrix load_matrix(const std::filesystem::path& path, ExperimentMatrix base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str(), std::move(base));
}

std::vector<std::string> preset_names() { return {"conflict", "threads", "txns", "cluster", "crash"}; }

ExperimentMatrix preset(std::string_view name) {
  ExperimentMatrix m;
  m.contracts = {Contract::kVoting, Contract::kWallet};
  m.threads = {16};
  m.txns = {4000};
  m.conflicts = {0.05};
  if (name == "conflict") {
    m.conflicts = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  } else if (name == "threads") {
    m.threads = {2, 4, 8, 16, 32, 64};
  } else if (name == "txns") {
    m.txns = {1000, 2000, 3000, 4000, 5000};
  } else if (name == "cluster") {
    m.clusters = {3, 5, 7};
  } else if (name == "crash") {
    m.clusters = {3, 5, 7};
    m.crashes = {0, 1, 2, 3};
    m.modes = {Mode::kCluster};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return m;
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  CsvWriter w(out);
  w.row({"mode", "contract", "threads", "tx_count", "conflict", "cluster", "crashes", "coordination_ms",
         "production_ms", "detection_ms", "assign_ms", "state_ms", "execution_ms", "total_ms", "root", "status",
         "state_bytes"});
  for (const auto& r : rows) {
    w.row({std::string(mode_name(r.mode)), std::string(contract_name(r.contract)), std::to_string(r.threads),
           std::to_string(r.tx_count), fmt_fraction(r.conflict), std::to_string(r.cluster),
           std::to_string(r.crashes), fmt_ms(r.timings.coordination_ms), fmt_ms(r.timings.production_ms),
           fmt_ms(r.timings.detection_ms), fmt_ms(r.timings.assign_ms), fmt_ms(r.timings.state_ms),
           fmt_ms(r.timings.execution_ms), fmt_ms(r.timings.total_ms), to_hex(r.root), r.status,
           std::to_string(r.state_bytes)});
  }
}

void write_breakdown_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  CsvWriter w(out);
  w.row({"mode", "contract", "threads", "tx_count", "conflict", "cluster", "crashes", "category", "ms"});
  const std::pair<const char*, double PhaseTimings::*> cats[] = {
      {"coordination overhead", &PhaseTimings::coordination_ms},
      {"block production", &PhaseTimings::production_ms},
      {"component detection", &PhaseTimings::detection_ms},
      {"assigning followers", &PhaseTimings::assign_ms},
      {"state changes", &PhaseTimings::state_ms},
      {"execution time", &PhaseTimings::execution_ms},
  };
  for (const auto& r : rows) {
    for (const auto& [name, slot] : cats) {
      w.row({std::string(mode_name(r.mode)), std::string(contract_name(r.contract)), std::to_string(r.threads),
             std::to_string(r.tx_count), fmt_fraction(r.conflict), std::to_string(r.cluster),
             std::to_string(r.crashes), name, fmt_ms(r.timings.*slot)});
    }
  }
}

void write_plot_dat(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "# mode contract threads tx_count conflict cluster crashes total_ms execution_ms status\n";
  for (const auto& r : rows) {
    out << mode_name(r.mode) << ' ' << contract_name(r.contract) << ' ' << r.threads << ' ' << r.tx_count << ' '
        << fmt_fraction(r.conflict) << ' ' << r.cluster << ' ' << r.crashes << ' ' << fmt_ms(r.timings.total_ms)
        << ' ' << fmt_ms(r.timings.execution_ms) << ' ' << r.status << '\n';
  }
}

std::vector<MerkleRow> merkle_read_sweep(MerkleBenchSpec spec, std::size_t parallelism, double step) {
  if (step <= 0) throw std::invalid_argument("sweep step must be positive");
  std::vector<MerkleRow> rows;
  for (double pct = 0; pct <= 100.0 + 1e-9; pct += step) {
    spec.read_fraction = pct / 100.0;
    rows.push_back({pct, run_merkle_bench(spec, parallelism)});
  }
  return rows;
}

void write_merkle_csv(std::ostream& out, const std::vector<MerkleRow>& rows) {
  CsvWriter w(out);
  w.row({"read_pct", "threads", "ops", "reads", "writes", "distinct_written", "sequential_ms", "concurrent_ms",
         "speedup", "sequential_root", "concurrent_root", "roots_equal"});
  for (const auto& row : rows) {
    const auto& r = row.result;
    w.row({fmt_fraction(row.read_pct), std::to_string(r.parallelism), std::to_string(r.ops), std::to_string(r.reads),
           std::to_string(r.writes), std::to_string(r.distinct_written), fmt_ms(r.sequential_ms),
           fmt_ms(r.concurrent_ms), fmt_ms(r.speedup()), to_hex(r.sequential_root), to_hex(r.concurrent_root),
           r.roots_equal() ? "true" : "false"});
  }
}

}  // namespace ibex::bench
