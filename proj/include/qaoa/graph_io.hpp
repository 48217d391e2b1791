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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qaoa/errors.hpp"
#include "qaoa/graph.hpp"

namespace qaoa {

using ordered_json = nlohmann::ordered_json;

inline ordered_json graph_to_json(const Graph& g) {
  ordered_json j;
  j["n"] = g.n();
  ordered_json edges = ordered_json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (g.seed()) {
    j["seed"] = *g.seed();
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

/// `where` prefixes error messages, typically a file path.
inline Graph graph_from_json(const nlohmann::json& j, const std::string& where = "graph") {
  if (!j.is_object()) throw FormatError(where + ": expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw FormatError(where + ": field \"n\" must be an integer");
  if (!j.contains("edges") || !j["edges"].is_array()) throw FormatError(where + ": field \"edges\" must be an array");
  const long long n = j["n"].get<long long>();
  if (n < 1 || n > 1'000'000) throw FormatError(where + ": field \"n\" out of range: " + std::to_string(n));
  std::vector<Edge> edges;
  const auto& arr = j["edges"];
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& e = arr[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw FormatError(where + ": edges[" + std::to_string(k) + "] must be a pair of integers");
    }
    const long long u = e[0].get<long long>();
    const long long v = e[1].get<long long>();
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw FormatError(where + ": edges[" + std::to_string(k) + "] endpoint out of range for n=" + std::to_string(n));
    }
    if (u == v) throw FormatError(where + ": edges[" + std::to_string(k) + "] is a self-loop on vertex " + std::to_string(u));
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_integer()) throw FormatError(where + ": field \"seed\" must be an integer or null");
    seed = j["seed"].get<std::uint64_t>();
  }
  try {
    return Graph(static_cast<int>(n), std::move(edges), seed);
  } catch (const InvalidArgument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

/// Canonical single-line form, e.g. {"n":3,"edges":[[0,1],[0,2],[1,2]],"seed":null}.
inline std::string graph_to_string(const Graph& g) { return graph_to_json(g).dump(); }

inline Graph parse_graph(const std::string& text, const std::string& where = "graph") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(where + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return graph_from_json(j, where);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

inline Graph read_graph(const std::filesystem::path& path) { return parse_graph(read_text_file(path), path.string()); }

inline void write_graph(const Graph& g, const std::filesystem::path& path) {
  write_text_file(path, graph_to_string(g) + "\n");
}

}  // namespace qaoa
