// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end for the baselines, the cluster simulation and the
// merkle benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ibex/bench/baselines.hpp"
#include "ibex/bench/csv.hpp"
#include "ibex/bench/experiment.hpp"
#include "ibex/bench/merkle_bench.hpp"
#include "ibex/bench/workload.hpp"
#include "ibex/cluster/config.hpp"
#include "ibex/coord/fault_plan.hpp"

namespace fs = std::filesystem;
using namespace ibex;

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void write_all(const fs::path& dir, const std::vector<bench::ExperimentRow>& rows) {
  auto results = open_out(dir, "results.csv");
  bench::write_results_csv(results, rows);
  auto breakdown = open_out(dir, "breakdown.csv");
  bench::write_breakdown_csv(breakdown, rows);
  auto dat = open_out(dir, "results.dat");
  bench::write_plot_dat(dat, rows);
}

void print_row(const bench::ExperimentRow& r) {
  std::cout << bench::mode_name(r.mode) << ' ' << bench::contract_name(r.contract) << " threads=" << r.threads
            << " txns=" << r.tx_count << " conflict=" << r.conflict << " cluster=" << r.cluster
            << " crashes=" << r.crashes << " total_ms=" << bench::fmt_ms(r.timings.total_ms)
            << " status=" << r.status << " root=" << to_hex(r.root).substr(0, 16) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ibex benchmark harness"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "key=value cluster configuration file");

  // bench run
  auto* run = app.add_subcommand("run", "run one block in one mode and cross-check against single-core");
  std::string mode = "cluster";
  std::string contract = "wallet";
  std::size_t txns = 1000;
  double conflict_pct = 0;
  std::size_t threads = 4;
  std::size_t cluster_size = 0;
  std::string crash_plan;
  std::string transport;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  run->add_option("--mode", mode)->check(CLI::IsMember({"single", "multi", "cluster"}));
  run->add_option("--contract", contract)->check(CLI::IsMember({"voting", "wallet"}));
  run->add_option("--txns", txns)->check(CLI::PositiveNumber);
  run->add_option("--conflict", conflict_pct, "dependency degree in percent")->check(CLI::Range(0.0, 100.0));
  run->add_option("--threads", threads)->check(CLI::PositiveNumber);
  run->add_option("--cluster", cluster_size, "cluster size (default from config, else 3)");
  run->add_option("--crash-plan", crash_plan)->check(CLI::ExistingFile);
  run->add_option("--transport", transport)->check(CLI::IsMember({"store", "msg"}));
  run->add_option("--seed", seed);
  run->add_option("--out", out_dir);

  // bench merkle
  auto* merkle = app.add_subcommand("merkle", "replay a key-value trace on the sequential and concurrent trees");
  std::size_t ops = 100'000;
  double read_pct = 0;
  std::size_t records = 10'000;
  std::string store = "file";
  bool sweep = false;
  merkle->add_option("--ops", ops)->check(CLI::PositiveNumber);
  merkle->add_option("--read-pct", read_pct)->check(CLI::Range(0.0, 100.0));
  merkle->add_option("--threads", threads)->check(CLI::PositiveNumber);
  merkle->add_option("--records", records)->check(CLI::PositiveNumber);
  merkle->add_option("--store", store)->check(CLI::IsMember({"file", "memory"}));
  merkle->add_flag("--sweep", sweep, "read percentage sweep 0..100 step 20");
  merkle->add_option("--seed", seed);
  merkle->add_option("--out", out_dir);

  // bench experiment
  auto* exp = app.add_subcommand("experiment", "run an experiment matrix");
  std::string preset_name;
  std::string matrix_file;
  exp->add_option("--preset", preset_name, "conflict|threads|txns|cluster|crash");
  exp->add_option("--matrix", matrix_file, "JSON matrix file")->check(CLI::ExistingFile);
  exp->add_option("--transport", transport)->check(CLI::IsMember({"store", "msg"}));
  exp->add_option("--seed", seed);
  exp->add_option("--out", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    cluster::ClusterConfig cfg;
    if (!config_file.empty()) cfg = cluster::load_config(config_file);
    if (!transport.empty()) cfg.transport = cluster::parse_transport(transport);

    if (*run) {
      if (cluster_size != 0) cfg.cluster_size = cluster_size;
      cfg.scheduler_threads = threads;
      cfg.fabric = coord::FabricOptions::direct();
      const auto c = bench::parse_contract(contract);
      const auto w = bench::generate_workload({c, txns, conflict_pct / 100.0, seed, 0.002});
      const Block block = bench::make_block(w.txs);
      const auto single = bench::run_single_core(block, w.genesis, cfg.tree);
      bench::RunResult result = single;
      const auto m = bench::parse_mode(mode);
      coord::FaultPlan plan;
      if (!crash_plan.empty()) plan = coord::FaultPlan::load(crash_plan);
      if (m == bench::Mode::kMulti) result = bench::run_multi_core(block, w.genesis, threads, cfg.tree);
      if (m == bench::Mode::kCluster) result = bench::run_cluster_mode(block, w.genesis, cfg, plan, seed);
      bench::ExperimentRow row;
      row.mode = m;
      row.contract = c;
      row.threads = m == bench::Mode::kSingle ? 1 : threads;
      row.tx_count = txns;
      row.conflict = conflict_pct / 100.0;
      row.cluster = m == bench::Mode::kCluster ? cfg.cluster_size : 1;
      row.crashes = plan.events.size();
      row.timings = result.timings;
      row.root = result.root;
      row.status = result.status;
      row.state_bytes = result.state_bytes;
      write_all(out_dir, {row});
      if (m == bench::Mode::kCluster) {
        auto events = open_out(out_dir, "events.log");
        for (const auto& e : result.report.events) events << e << '\n';
        for (const auto& f : result.report.faults) events << "fault " << f << '\n';
      }
      print_row(row);
      std::cout << "degree=" << w.degree << " single_root=" << to_hex(single.root).substr(0, 16) << '\n';
      const bool ok = result.status != "diverged" && (!result.committed() || result.root == single.root);
      if (!ok) std::cerr << "correctness check failed: root differs from single-core\n";
      return ok ? 0 : 1;
    }

    if (*merkle) {
      bench::MerkleBenchSpec spec;
      spec.ops = ops;
      spec.records = records;
      spec.read_fraction = read_pct / 100.0;
      spec.seed = seed;
      spec.store = store == "file" ? bench::StoreKind::kFile : bench::StoreKind::kMemory;
      spec.tree = cfg.tree;
      std::vector<bench::MerkleRow> rows;
      if (sweep) {
        rows = bench::merkle_read_sweep(spec, threads);
      } else {
        rows.push_back({read_pct, bench::run_merkle_bench(spec, threads)});
      }
      auto out = open_out(out_dir, "merkle.csv");
      bench::write_merkle_csv(out, rows);
      bool ok = true;
      for (const auto& r : rows) {
        std::cout << "read_pct=" << r.read_pct << " sequential_ms=" << bench::fmt_ms(r.result.sequential_ms)
                  << " concurrent_ms=" << bench::fmt_ms(r.result.concurrent_ms)
                  << " speedup=" << bench::fmt_ms(r.result.speedup())
                  << " roots_equal=" << (r.result.roots_equal() ? "yes" : "no") << '\n';
        ok = ok && r.result.roots_equal();
      }
      return ok ? 0 : 1;
    }

    if (*exp) {
      if (preset_name.empty() == matrix_file.empty()) {
        std::cerr << "give exactly one of --preset or --matrix\n";
        return 2;
      }
      bench::ExperimentMatrix m = preset_name.empty() ? bench::ExperimentMatrix{} : bench::preset(preset_name);
      m.base = cfg;
      m.seed = seed;
      if (!matrix_file.empty()) m = bench::load_matrix(matrix_file, m);
      const auto res = bench::run_experiment(m, print_row);
      write_all(out_dir, res.rows);
      if (!res.ok) {
        std::cerr << "correctness failure: " << res.report << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
