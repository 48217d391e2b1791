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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and returns exit code and stdout.
CliRun cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QAOA_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  CliRun r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("qaoa_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string triangle(const fs::path& dir) {
  const fs::path p = dir / "k3.json";
  write(p, R"({"n":3,"edges":[[0,1],[0,2],[1,2]],"seed":null})");
  return p.string();
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST(Cli, no_arguments_is_usage_error) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, gen_dataset) {
  const fs::path dir = fresh_dir("gen");
  const CliRun r = cli("gen-dataset --nodes 3,4 --count 2 --seed 1 --out " + (dir / "ds").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "wrote 2 graphs (n=3)\nwrote 2 graphs (n=4)\n");
  EXPECT_TRUE(fs::exists(dir / "ds" / "4nodes" / "graph_001.json"));
  EXPECT_EQ(cli("gen-dataset --edge-prob 1.5 --out " + dir.string()).code, 1);
}

TEST(Cli, solve_qaoa_triangle) {
  const fs::path dir = fresh_dir("qaoa");
  const CliRun r = cli("solve-qaoa --graph " + triangle(dir) + " --p 1 --shots 256 --seed 3 --params-out " +
                    (dir / "params.json").string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cut_value"], 2);
  EXPECT_EQ(j["best_sampled"]["cut_value"], 2);
  EXPECT_LE(j["most_probable"]["cut_value"].get<int>(), 2);
  EXPECT_EQ(j["partition"].size(), 3U);
  EXPECT_EQ(j["params"]["p"], 1);
  EXPECT_LE(j["expected_cut"].get<double>(), 2.0 + 1e-9);
  const auto params = nlohmann::json::parse(std::ifstream(dir / "params.json"));
  EXPECT_EQ(params["gammas"].size(), 1U);
}

TEST(Cli, solve_qaoa_errors) {
  const fs::path dir = fresh_dir("qaoa_err");
  EXPECT_EQ(cli("solve-qaoa --graph " + triangle(dir) + " --p 0").code, 1);
  EXPECT_EQ(cli("solve-qaoa --graph " + triangle(dir) + " --optimizer adam").code, 1);
  EXPECT_EQ(cli("solve-qaoa --graph " + (dir / "missing.json").string()).code, 2);
  write(dir / "bad.json", R"({"n":2,"edges":[[0,0]]})");
  EXPECT_EQ(cli("solve-qaoa --graph " + (dir / "bad.json").string()).code, 2);
}

TEST(Cli, solve_qaoa_is_deterministic) {
  const fs::path dir = fresh_dir("qaoa_det");
  const std::string args = "solve-qaoa --graph " + triangle(dir) + " --p 2 --optimizer nelder-mead --seed 8";
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, solve_classical) {
  const fs::path dir = fresh_dir("classical");
  const CliRun r = cli("solve-classical --graph " + triangle(dir));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["cut_value"], 2);
  write(dir / "empty.json", R"({"n":4,"edges":[],"seed":null})");
  const CliRun e = cli("solve-classical --start zeros --graph " + (dir / "empty.json").string());
  ASSERT_EQ(e.code, 0);
  const auto j = nlohmann::json::parse(e.out);
  EXPECT_EQ(j["cut_value"], 0);
  EXPECT_EQ(j["partition"], nlohmann::json::parse("[0,0,0,0]"));
}

TEST(Cli, run_experiment_and_report) {
  const fs::path dir = fresh_dir("experiment");
  write(dir / "config.json",
        R"({"node_counts":[4],"graphs_per_count":2,"depths":[1,2,3],"optimizers":["bfgs","nelder-mead"],)"
        R"("shots":64,"master_seed":2,"parallelism":2})");
  const CliRun r = cli("run-experiment --config " + (dir / "config.json").string() + " --out " + (dir / "out").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(dir / "out" / "records.jsonl"), 12);
  EXPECT_EQ(count_lines(dir / "out" / "report.csv"), 7);

  const CliRun rep = cli("report --records " + (dir / "out" / "records.jsonl").string() + " --out " +
                      (dir / "again.csv").string());
  ASSERT_EQ(rep.code, 0);
  std::ifstream a(dir / "out" / "report.csv"), b(dir / "again.csv");
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}), std::string(std::istreambuf_iterator<char>(b), {}));

  write(dir / "empty.jsonl", "");
  EXPECT_EQ(cli("report --records " + (dir / "empty.jsonl").string()).code, 1);
  write(dir / "bad_config.json", R"({"edge_prob":2})");
  EXPECT_EQ(cli("run-experiment --config " + (dir / "bad_config.json").string() + " --out " + dir.string()).code, 1);
}
