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

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qaoa/ansatz.hpp"
#include "qaoa/errors.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/graph_io.hpp"
#include "qaoa/optimizers.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

namespace fs = std::filesystem;

struct ExperimentConfig {
  std::vector<int> node_counts{10, 20};
  int graphs_per_count = 100;
  double edge_prob = 0.5;
  std::vector<int> depths{1, 2, 3};
  std::vector<std::string> optimizers{"bfgs", "nelder-mead"};
  std::uint64_t shots = 1024;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  int restarts = 1;
  std::string dataset_dir;  // empty: <out>/dataset, generated on demand

  void validate() const {
    if (node_counts.empty()) throw InvalidArgument("node_counts must not be empty");
    for (int n : node_counts) {
      if (n < 1) throw InvalidArgument("node counts must be positive");
    }
    if (graphs_per_count < 1) throw InvalidArgument("graphs_per_count must be positive");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InvalidArgument("edge_prob must lie in [0, 1]");
    if (depths.empty()) throw InvalidArgument("depths must not be empty");
    for (int p : depths) {
      if (p < 1) throw InvalidArgument("depths must be positive");
    }
    if (optimizers.empty()) throw InvalidArgument("optimizers must not be empty");
    for (const auto& o : optimizers) parse_method(o);
    if (shots < 1) throw InvalidArgument("shots must be positive");
    if (parallelism < 1) throw InvalidArgument("parallelism must be positive");
    if (restarts < 1) throw InvalidArgument("restarts must be positive");
  }
};

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["node_counts"] = c.node_counts;
  j["graphs_per_count"] = c.graphs_per_count;
  j["edge_prob"] = c.edge_prob;
  j["depths"] = c.depths;
  j["optimizers"] = c.optimizers;
  j["shots"] = c.shots;
  j["master_seed"] = c.master_seed;
  j["parallelism"] = c.parallelism;
  j["restarts"] = c.restarts;
  j["dataset_dir"] = c.dataset_dir;
  return j;
}

/// Missing fields keep their defaults; unknown fields are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "node_counts") c.node_counts = value.get<std::vector<int>>();
      else if (key == "graphs_per_count") c.graphs_per_count = value.get<int>();
      else if (key == "edge_prob") c.edge_prob = value.get<double>();
      else if (key == "depths") c.depths = value.get<std::vector<int>>();
      else if (key == "optimizers") c.optimizers = value.get<std::vector<std::string>>();
      else if (key == "shots") c.shots = value.get<std::uint64_t>();
      else if (key == "master_seed") c.master_seed = value.get<std::uint64_t>();
      else if (key == "parallelism") c.parallelism = value.get<int>();
      else if (key == "restarts") c.restarts = value.get<int>();
      else if (key == "dataset_dir") c.dataset_dir = value.get<std::string>();
      else throw FormatError("unknown config field \"" + key + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("experiment config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("experiment config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig read_config(const fs::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": malformed JSON: " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------- dataset

struct DatasetEntry {
  std::string graph_id;  // "<n>nodes/graph_<index>"
  int index = 0;
  Graph graph;
};

inline std::uint64_t graph_seed(std::uint64_t master_seed, int n, int index) {
  return hash64({master_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index)});
}

inline std::string graph_relpath(int n, int index) {
  char name[32];
  std::snprintf(name, sizeof name, "graph_%03d.json", index);
  return std::to_string(n) + "nodes/" + name;
}

inline std::string graph_id(int n, int index) {
  const std::string rel = graph_relpath(n, index);
  return rel.substr(0, rel.size() - 5);
}

/// The dataset as an in-memory list, without touching the filesystem.
inline std::vector<DatasetEntry> make_dataset(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<DatasetEntry> out;
  for (int n : cfg.node_counts) {
    for (int i = 0; i < cfg.graphs_per_count; ++i) {
      out.push_back({graph_id(n, i), i, generate_erdos_renyi(n, cfg.edge_prob, graph_seed(cfg.master_seed, n, i))});
    }
  }
  return out;
}

/// Writes <dir>/<n>nodes/graph_<index>.json for every graph and returns the
/// number written per node count.
inline std::map<int, int> generate_dataset(const ExperimentConfig& cfg, const fs::path& dir) {
  std::map<int, int> written;
  for (const DatasetEntry& e : make_dataset(cfg)) {
    const fs::path path = dir / graph_relpath(e.graph.n(), e.index);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    write_graph(e.graph, path);
    ++written[e.graph.n()];
  }
  return written;
}

inline std::vector<DatasetEntry> load_dataset(const ExperimentConfig& cfg, const fs::path& dir) {
  std::vector<DatasetEntry> out;
  for (int n : cfg.node_counts) {
    for (int i = 0; i < cfg.graphs_per_count; ++i) {
      Graph g = read_graph(dir / graph_relpath(n, i));
      if (g.n() != n) throw FormatError((dir / graph_relpath(n, i)).string() + ": expected " + std::to_string(n) + " vertices");
      out.push_back({graph_id(n, i), i, std::move(g)});
    }
  }
  return out;
}

// ---------------------------------------------------------------- records

struct ExperimentRecord {
  std::string graph_id;
  int n = 0;
  int num_edges = 0;
  std::string optimizer;
  int p = 0;
  int qaoa_best_sampled = 0;
  int qaoa_most_probable = 0;
  double qaoa_expected_cut = 0.0;
  int classical_cut = 0;
  double optimize_wall_seconds = 0.0;
  double setup_wall_seconds = 0.0;
  std::uint64_t n_evals = 0;
  std::uint64_t n_grad_evals = 0;
  bool converged = false;
  QaoaParams final_params;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Field names that carry wall-clock measurements.
inline const std::vector<std::string>& wall_time_fields() {
  static const std::vector<std::string> fields{"optimize_wall_seconds", "setup_wall_seconds"};
  return fields;
}

inline nlohmann::ordered_json record_to_json(const ExperimentRecord& r) {
  nlohmann::ordered_json j;
  j["graph_id"] = r.graph_id;
  j["n"] = r.n;
  j["num_edges"] = r.num_edges;
  j["optimizer"] = r.optimizer;
  j["p"] = r.p;
  j["qaoa_best_sampled"] = r.qaoa_best_sampled;
  j["qaoa_most_probable"] = r.qaoa_most_probable;
  j["qaoa_expected_cut"] = r.qaoa_expected_cut;
  j["classical_cut"] = r.classical_cut;
  j["optimize_wall_seconds"] = r.optimize_wall_seconds;
  j["setup_wall_seconds"] = r.setup_wall_seconds;
  j["n_evals"] = r.n_evals;
  j["n_grad_evals"] = r.n_grad_evals;
  j["converged"] = r.converged;
  j["final_params"] = r.final_params.gammas.empty() ? nlohmann::ordered_json(nullptr) : params_to_json(r.final_params);
  j["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
  return j;
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  try {
    r.graph_id = j.at("graph_id").get<std::string>();
    r.n = j.at("n").get<int>();
    r.num_edges = j.value("num_edges", 0);
    r.optimizer = j.at("optimizer").get<std::string>();
    r.p = j.at("p").get<int>();
    r.qaoa_best_sampled = j.at("qaoa_best_sampled").get<int>();
    r.qaoa_most_probable = j.value("qaoa_most_probable", 0);
    r.qaoa_expected_cut = j.at("qaoa_expected_cut").get<double>();
    r.classical_cut = j.at("classical_cut").get<int>();
    r.optimize_wall_seconds = j.at("optimize_wall_seconds").get<double>();
    r.setup_wall_seconds = j.value("setup_wall_seconds", 0.0);
    r.n_evals = j.at("n_evals").get<std::uint64_t>();
    r.n_grad_evals = j.at("n_grad_evals").get<std::uint64_t>();
    r.converged = j.value("converged", false);
    if (j.contains("final_params") && !j["final_params"].is_null()) r.final_params = params_from_json(j["final_params"]);
    if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("experiment record: ") + e.what());
  }
  return r;
}

inline std::vector<ExperimentRecord> read_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ExperimentRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- runs

struct RunSeeds {
  std::uint64_t qaoa = 0;       // initial parameters (restart 0) and, mixed, the sampler
  std::uint64_t classical = 0;  // one-exchange start partition
};

/// One graph, one optimizer, one depth. Never throws for optimizer or
/// simulation failures; those land in ExperimentRecord::error.
inline ExperimentRecord run_single(const Graph& g, Method method, int p, std::uint64_t shots, RunSeeds seeds,
                                   int restarts = 1) {
  ExperimentRecord rec;
  rec.n = g.n();
  rec.num_edges = g.num_edges();
  rec.optimizer = method_name(method);
  rec.p = p;
  try {
    if (p < 1) throw InvalidArgument("QAOA depth must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();
    const QaoaCircuit circuit(g);
    rec.setup_wall_seconds = detail::seconds_since(t0);

    OptimizerConfig cfg;
    cfg.method = method;
    cfg.restarts = restarts;
    cfg.init_seed = seeds.qaoa;
    const OptimizeResult opt = minimize_qaoa(circuit, p, cfg);
    rec.optimize_wall_seconds = opt.wall_time_seconds;
    rec.n_evals = opt.n_evals;
    rec.n_grad_evals = opt.n_grad_evals;
    rec.converged = opt.converged;
    rec.final_params = QaoaParams::from_vector(opt.best_params);

    const QaoaSolution sol = extract_solution(circuit, rec.final_params, shots, hash64({seeds.qaoa, 0x5eedULL}));
    rec.qaoa_best_sampled = sol.best_sampled.cut_value;
    rec.qaoa_most_probable = sol.most_probable.cut_value;
    rec.qaoa_expected_cut = sol.expected_cut;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.classical_cut = one_exchange_maxcut(g, seeds.classical).cut_value;
  return rec;
}

inline ExperimentRecord run_single(const Graph& g, Method method, int p, std::uint64_t shots, std::uint64_t seed) {
  return run_single(g, method, p, shots, RunSeeds{seed, hash64({seed, 0xc1a55ULL})});
}

struct MatrixTask {
  std::size_t graph = 0;  // index into the dataset
  Method method = Method::bfgs;
  int p = 1;
};

/// Task order: dataset order, then optimizer order, then depth order.
inline std::vector<MatrixTask> matrix_tasks(const ExperimentConfig& cfg, std::size_t num_graphs) {
  std::vector<MatrixTask> tasks;
  for (std::size_t gi = 0; gi < num_graphs; ++gi) {
    for (const auto& name : cfg.optimizers) {
      for (int p : cfg.depths) tasks.push_back({gi, parse_method(name), p});
    }
  }
  return tasks;
}

inline RunSeeds task_seeds(std::uint64_t master_seed, const DatasetEntry& e, Method method, int p) {
  const std::uint64_t n = static_cast<std::uint64_t>(e.graph.n());
  const std::uint64_t idx = static_cast<std::uint64_t>(e.index);
  return {hash64({master_seed, n, idx, static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(p), 1}),
          hash64({master_seed, n, idx, 3})};
}

/// Runs the graph x optimizer x depth cross product over `parallelism`
/// workers. Records are written to `sink` (when given) one JSON line each, in
/// task order, flushed as soon as every earlier task has finished.
inline std::vector<ExperimentRecord> run_matrix(const ExperimentConfig& cfg, const std::vector<DatasetEntry>& dataset,
                                                std::ostream* sink = nullptr) {
  cfg.validate();
  const std::vector<MatrixTask> tasks = matrix_tasks(cfg, dataset.size());
  std::vector<std::optional<ExperimentRecord>> done(tasks.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto run_task = [&](std::size_t t) {
    const MatrixTask& task = tasks[t];
    const DatasetEntry& e = dataset[task.graph];
    ExperimentRecord rec =
        run_single(e.graph, task.method, task.p, cfg.shots, task_seeds(cfg.master_seed, e, task.method, task.p),
                   cfg.restarts);
    rec.graph_id = e.graph_id;
    return rec;
  };

  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
      ExperimentRecord rec = run_task(t);
      {
        std::lock_guard<std::mutex> lock(mu);
        done[t] = std::move(rec);
      }
      cv.notify_all();
    }
  };

  const int workers = std::min<int>(cfg.parallelism, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);

  std::vector<ExperimentRecord> out;
  out.reserve(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return done[t].has_value(); });
    ExperimentRecord rec = std::move(*done[t]);
    done[t].reset();
    lock.unlock();
    if (sink) {
      *sink << record_to_json(rec).dump() << '\n';
      sink->flush();
    }
    out.push_back(std::move(rec));
  }
  for (auto& th : pool) th.join();
  return out;
}

// ---------------------------------------------------------------- aggregation

struct AggregateCell {
  int n = 0;
  std::string optimizer;
  int p = 0;
  int count = 0;
  double mean_qaoa_cut = 0.0;
  double std_qaoa_cut = 0.0;
  double mean_classical_cut = 0.0;
  double ratio_of_means = 0.0;
  double mean_ratio = 0.0;
  double mean_runtime_s = 0.0;
  double std_runtime_s = 0.0;
};

struct AggregateReport {
  std::vector<AggregateCell> cells;
  std::vector<std::string> warnings;
};

namespace detail {

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// a / b with 0 / 0 read as 1 (both methods cut nothing on an edgeless graph).
inline double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

}  // namespace detail

/// Groups records by (n, optimizer, p). The headline ratio is mean(QAOA best
/// sampled cut) / mean(classical cut); the mean of per-graph ratios is kept
/// alongside. Failed records are left out of every statistic.
inline AggregateReport aggregate(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw InvalidArgument("no records");
  using Key = std::tuple<int, std::string, int>;
  std::map<Key, std::vector<const ExperimentRecord*>> groups;
  for (const ExperimentRecord& r : records) groups[{r.n, r.optimizer, r.p}].push_back(&r);

  AggregateReport report;
  for (const auto& [key, members] : groups) {
    std::vector<double> q, c, ratio, t;
    int failed = 0;
    for (const ExperimentRecord* r : members) {
      if (!r->ok()) {
        ++failed;
        continue;
      }
      q.push_back(r->qaoa_best_sampled);
      c.push_back(r->classical_cut);
      ratio.push_back(detail::safe_ratio(r->qaoa_best_sampled, r->classical_cut));
      t.push_back(r->optimize_wall_seconds);
    }
    const auto& [n, opt, p] = key;
    const std::string cell_name = "n=" + std::to_string(n) + " " + opt + " p=" + std::to_string(p);
    if (failed > 0) report.warnings.push_back(cell_name + ": " + std::to_string(failed) + " failed record(s) excluded");
    if (q.empty()) {
      report.warnings.push_back(cell_name + ": no usable records, cell omitted");
      continue;
    }
    AggregateCell cell;
    cell.n = n;
    cell.optimizer = opt;
    cell.p = p;
    cell.count = static_cast<int>(q.size());
    cell.mean_qaoa_cut = detail::mean(q);
    cell.std_qaoa_cut = detail::sample_std(q);
    cell.mean_classical_cut = detail::mean(c);
    cell.ratio_of_means = detail::safe_ratio(cell.mean_qaoa_cut, cell.mean_classical_cut);
    cell.mean_ratio = detail::mean(ratio);
    cell.mean_runtime_s = detail::mean(t);
    cell.std_runtime_s = detail::sample_std(t);
    report.cells.push_back(cell);
  }
  return report;
}

inline const AggregateCell* find_cell(const AggregateReport& report, int n, const std::string& optimizer, int p) {
  for (const AggregateCell& c : report.cells) {
    if (c.n == n && c.optimizer == optimizer && c.p == p) return &c;
  }
  return nullptr;
}

inline constexpr const char* kReportHeader =
    "n,optimizer,p,mean_qaoa_cut,std_qaoa_cut,mean_classical_cut,ratio_of_means,mean_ratio,mean_runtime_s,std_runtime_s";

inline std::string report_to_csv(const AggregateReport& report) {
  std::string out = std::string(kReportHeader) + "\n";
  char line[512];
  for (const AggregateCell& c : report.cells) {
    std::snprintf(line, sizeof line, "%d,%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", c.n, c.optimizer.c_str(), c.p,
                  c.mean_qaoa_cut, c.std_qaoa_cut, c.mean_classical_cut, c.ratio_of_means, c.mean_ratio,
                  c.mean_runtime_s, c.std_runtime_s);
    out += line;
  }
  return out;
}

inline void print_report_table(const AggregateReport& report, std::ostream& os) {
  os << std::left << std::setw(5) << "n" << std::setw(13) << "optimizer" << std::setw(4) << "p" << std::right
     << std::setw(7) << "graphs" << std::setw(11) << "qaoa_cut" << std::setw(11) << "classical" << std::setw(9)
     << "ratio" << std::setw(12) << "runtime_s" << '\n';
  for (const AggregateCell& c : report.cells) {
    os << std::left << std::setw(5) << c.n << std::setw(13) << c.optimizer << std::setw(4) << c.p << std::right
       << std::setw(7) << c.count << std::fixed << std::setprecision(3) << std::setw(11) << c.mean_qaoa_cut
       << std::setw(11) << c.mean_classical_cut << std::setw(9) << c.ratio_of_means << std::setw(12)
       << c.mean_runtime_s << '\n';
  }
  os.unsetf(std::ios::fixed);
}

}  // namespace qaoa
