// Copyright 2026 The qaoa-maxcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qaoa-maxcut: dataset generation, single-instance solvers, experiment runs
// and report aggregation.
//
// Exit codes: 0 success, 1 usage or invalid input values, 2 IO or data errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaoa/qaoa.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

void print_resolved(const std::string& command, const ordered_json& cfg) {
  std::cerr << "resolved config (" << command << "): " << cfg.dump() << '\n';
}

ordered_json partition_json(const qaoa::Partition& part) {
  ordered_json arr = ordered_json::array();
  for (std::size_t v = 0; v < part.size(); ++v) arr.push_back(static_cast<int>(part[v]));
  return arr;
}

ordered_json cut_json(const qaoa::CutResult& r) {
  ordered_json j;
  j["cut_value"] = r.cut_value;
  j["partition"] = partition_json(r.partition);
  return j;
}

struct GenDatasetArgs {
  std::vector<int> nodes{10, 20};
  int count = 100;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::string out = "dataset";
};

int run_gen_dataset(const GenDatasetArgs& a) {
  qaoa::ExperimentConfig cfg;
  cfg.node_counts = a.nodes;
  cfg.graphs_per_count = a.count;
  cfg.edge_prob = a.edge_prob;
  cfg.master_seed = a.seed;
  ordered_json resolved;
  resolved["nodes"] = a.nodes;
  resolved["count"] = a.count;
  resolved["edge_prob"] = a.edge_prob;
  resolved["seed"] = a.seed;
  resolved["out"] = a.out;
  print_resolved("gen-dataset", resolved);
  const auto written = qaoa::generate_dataset(cfg, a.out);
  for (const auto& [n, count] : written) std::cout << "wrote " << count << " graphs (n=" << n << ")\n";
  return 0;
}

struct SolveQaoaArgs {
  std::string graph;
  int p = 1;
  std::string optimizer = "bfgs";
  std::uint64_t shots = 1024;
  std::uint64_t seed = 0;
  int restarts = 1;
  std::string params_out;
};

int run_solve_qaoa(const SolveQaoaArgs& a) {
  ordered_json resolved;
  resolved["graph"] = a.graph;
  resolved["p"] = a.p;
  resolved["optimizer"] = a.optimizer;
  resolved["shots"] = a.shots;
  resolved["seed"] = a.seed;
  resolved["restarts"] = a.restarts;
  resolved["params_out"] = a.params_out;
  print_resolved("solve-qaoa", resolved);

  const qaoa::Graph g = qaoa::read_graph(a.graph);
  if (g.n() > qaoa::kMaxQubits) throw qaoa::InvalidArgument("graph too large to simulate");
  const qaoa::QaoaCircuit circuit(g);
  qaoa::OptimizerConfig cfg;
  cfg.method = qaoa::parse_method(a.optimizer);
  cfg.restarts = a.restarts;
  cfg.init_seed = a.seed;
  const qaoa::OptimizeResult opt = qaoa::minimize_qaoa(circuit, a.p, cfg);
  const qaoa::QaoaParams params = qaoa::QaoaParams::from_vector(opt.best_params);
  const qaoa::QaoaSolution sol =
      qaoa::extract_solution(circuit, params, a.shots, qaoa::hash64({a.seed, 0x5eedULL}));

  ordered_json out;
  out["n"] = g.n();
  out["num_edges"] = g.num_edges();
  out["optimizer"] = a.optimizer;
  out["p"] = a.p;
  out["shots"] = a.shots;
  out["seed"] = a.seed;
  out["cut_value"] = sol.best_sampled.cut_value;
  out["partition"] = partition_json(sol.best_sampled.partition);
  out["best_sampled"] = cut_json(sol.best_sampled);
  out["most_probable"] = cut_json(sol.most_probable);
  out["expected_cut"] = sol.expected_cut;
  out["objective"] = opt.best_value;
  out["params"] = qaoa::params_to_json(params);
  out["n_evals"] = opt.n_evals;
  out["n_grad_evals"] = opt.n_grad_evals;
  out["converged"] = opt.converged;
  out["line_search_failed"] = opt.line_search_failed;
  std::cout << out.dump() << '\n';
  std::cerr << "optimize wall time: " << opt.wall_time_seconds << " s\n";

  if (!a.params_out.empty()) qaoa::write_text_file(a.params_out, qaoa::params_to_json(params).dump() + "\n");
  return 0;
}

struct SolveClassicalArgs {
  std::string graph;
  std::uint64_t seed = 0;
  std::string start = "random";
};

int run_solve_classical(const SolveClassicalArgs& a) {
  ordered_json resolved;
  resolved["graph"] = a.graph;
  resolved["seed"] = a.seed;
  resolved["start"] = a.start;
  print_resolved("solve-classical", resolved);
  const qaoa::Graph g = qaoa::read_graph(a.graph);
  const qaoa::CutResult r = a.start == "zeros" ? qaoa::one_exchange_from(g, qaoa::Partition::zeros(g.n()))
                                               : qaoa::one_exchange_maxcut(g, a.seed);
  std::cout << cut_json(r).dump() << '\n';
  return 0;
}

struct RunExperimentArgs {
  std::string config;
  std::string out = "results";
  std::optional<int> workers;
};

int run_experiment(const RunExperimentArgs& a) {
  qaoa::ExperimentConfig cfg;
  try {
    cfg = qaoa::read_config(a.config);
    if (a.workers) cfg.parallelism = *a.workers;
    cfg.validate();
  } catch (const qaoa::FormatError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kExitUsage;
  }
  print_resolved("run-experiment", qaoa::config_to_json(cfg));

  const fs::path out_dir = a.out;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw qaoa::IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<qaoa::DatasetEntry> dataset;
  if (cfg.dataset_dir.empty()) {
    const fs::path dir = out_dir / "dataset";
    qaoa::generate_dataset(cfg, dir);
    dataset = qaoa::load_dataset(cfg, dir);
  } else {
    dataset = qaoa::load_dataset(cfg, cfg.dataset_dir);
  }

  const fs::path records_path = out_dir / "records.jsonl";
  std::ofstream sink(records_path, std::ios::trunc);
  if (!sink) throw qaoa::IoError("cannot open " + records_path.string() + " for writing");
  const auto records = qaoa::run_matrix(cfg, dataset, &sink);
  sink.close();
  std::cout << "wrote " << records.size() << " records to " << records_path.string() << '\n';

  const qaoa::AggregateReport report = qaoa::aggregate(records);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const fs::path csv_path = out_dir / "report.csv";
  qaoa::write_text_file(csv_path, qaoa::report_to_csv(report));
  std::cout << "report: " << csv_path.string() << '\n';
  qaoa::print_report_table(report, std::cout);
  return 0;
}

struct ReportArgs {
  std::string records;
  std::string out;
};

int run_report(const ReportArgs& a) {
  const fs::path csv_path = a.out.empty() ? fs::path(a.records).parent_path() / "report.csv" : fs::path(a.out);
  ordered_json resolved;
  resolved["records"] = a.records;
  resolved["out"] = csv_path.string();
  print_resolved("report", resolved);
  const auto records = qaoa::read_records(a.records);
  if (records.empty()) {
    std::cerr << "error: no records in " << a.records << '\n';
    return kExitUsage;
  }
  const qaoa::AggregateReport report = qaoa::aggregate(records);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  qaoa::write_text_file(csv_path, qaoa::report_to_csv(report));
  std::cout << "report: " << csv_path.string() << '\n';
  qaoa::print_report_table(report, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA for MaxCut on a statevector simulator"};
  app.require_subcommand(1);

  GenDatasetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate Erdos-Renyi graphs in the canonical JSON layout");
  gen_cmd->add_option("--nodes", gen.nodes, "Vertex counts")->check(CLI::PositiveNumber)->delimiter(',');
  gen_cmd->add_option("--count", gen.count, "Graphs per vertex count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--edge-prob", gen.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  SolveQaoaArgs qa;
  auto* qaoa_cmd = app.add_subcommand("solve-qaoa", "Optimize a QAOA circuit for one graph");
  qaoa_cmd->add_option("--graph", qa.graph, "Graph JSON file")->required();
  qaoa_cmd->add_option("--p", qa.p, "Circuit depth")->check(CLI::Range(1, 64));
  qaoa_cmd->add_option("--optimizer", qa.optimizer, "bfgs or nelder-mead")->check(CLI::IsMember({"bfgs", "nelder-mead"}));
  qaoa_cmd->add_option("--shots", qa.shots, "Samples drawn from the optimized state")->check(CLI::PositiveNumber);
  qaoa_cmd->add_option("--seed", qa.seed, "Seed for initial angles and sampling");
  qaoa_cmd->add_option("--restarts", qa.restarts, "Random restarts")->check(CLI::PositiveNumber);
  qaoa_cmd->add_option("--params-out", qa.params_out, "Write optimized parameters JSON here");

  SolveClassicalArgs cl;
  auto* cl_cmd = app.add_subcommand("solve-classical", "One-exchange local search on one graph");
  cl_cmd->add_option("--graph", cl.graph, "Graph JSON file")->required();
  cl_cmd->add_option("--seed", cl.seed, "Seed for the random start partition");
  cl_cmd->add_option("--start", cl.start, "random or zeros")->check(CLI::IsMember({"random", "zeros"}));

  RunExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("run-experiment", "Run the full graph x optimizer x depth matrix");
  ex_cmd->add_option("--config", ex.config, "Experiment config JSON")->required();
  ex_cmd->add_option("--out", ex.out, "Output directory for records.jsonl and report.csv");
  ex_cmd->add_option("--workers", ex.workers, "Worker threads (overrides config parallelism)")->check(CLI::PositiveNumber);

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Aggregate records into the CSV report");
  rep_cmd->add_option("--records", rep.records, "records.jsonl")->required();
  rep_cmd->add_option("--out", rep.out, "CSV path (default: report.csv next to the records)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen_dataset(gen);
    if (*qaoa_cmd) return run_solve_qaoa(qa);
    if (*cl_cmd) return run_solve_classical(cl);
    if (*ex_cmd) return run_experiment(ex);
    if (*rep_cmd) return run_report(rep);
  } catch (const qaoa::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qaoa::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qaoa::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
