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

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qaoa/errors.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

/// Largest vertex count accepted by the exhaustive routines (brute force,
/// cut tables, statevectors): 2^24 entries.
inline constexpr int kMaxEnumerableVertices = 24;

struct Edge {
  int u = 0;
  int v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted simple graph. Edges are kept with u < v and sorted
/// lexicographically, so two graphs with the same edge set compare equal and
/// serialize identically.
class Graph {
 public:
  Graph() = default;

  Graph(int n, std::vector<Edge> edges, std::optional<std::uint64_t> seed = std::nullopt)
      : n_(n), edges_(std::move(edges)), seed_(seed) {
    if (n_ < 1) throw InvalidArgument("graph must have at least one vertex, got n=" + std::to_string(n_));
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      Edge& e = edges_[k];
      if (e.u == e.v) {
        throw InvalidArgument("edge " + std::to_string(k) + ": self-loop on vertex " + std::to_string(e.u));
      }
      if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
        throw InvalidArgument("edge " + std::to_string(k) + ": endpoint out of range for n=" + std::to_string(n_) +
                              " (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
      throw InvalidArgument("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::optional<std::uint64_t> seed() const { return seed_; }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const Edge& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

  /// Same edge set after mapping vertex v to perm[v].
  Graph relabeled(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != n_) throw InvalidArgument("permutation size does not match vertex count");
    std::vector<Edge> mapped;
    mapped.reserve(edges_.size());
    for (const Edge& e : edges_) mapped.push_back({perm[e.u], perm[e.v]});
    return Graph(n_, std::move(mapped), seed_);
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 1;
  std::vector<Edge> edges_;
  std::optional<std::uint64_t> seed_;
};

/// One bit per vertex; bit value selects the side. Bit 0 corresponds to the
/// +1 eigenvalue of Pauli-Z on that vertex's qubit, bit 1 to -1.
struct Partition {
  std::vector<std::uint8_t> bits;

  Partition() = default;
  explicit Partition(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

  static Partition zeros(int n) { return Partition(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)); }

  /// Bit v of the basis index becomes the side of vertex v.
  static Partition from_index(std::uint64_t index, int n) {
    std::vector<std::uint8_t> b(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) b[v] = static_cast<std::uint8_t>((index >> v) & 1U);
    return Partition(std::move(b));
  }

  /// Parses a bitstring written with the highest vertex first ("001" puts
  /// vertex 0 on side 1), the same order used for basis-state labels.
  static Partition from_string(const std::string& s) {
    std::vector<std::uint8_t> b(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      char c = s[s.size() - 1 - k];
      if (c != '0' && c != '1') throw InvalidArgument("partition string must contain only 0/1: " + s);
      b[k] = static_cast<std::uint8_t>(c - '0');
    }
    return Partition(std::move(b));
  }

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t v) const { return bits[v]; }

  std::uint64_t to_index() const {
    std::uint64_t idx = 0;
    for (std::size_t v = 0; v < bits.size(); ++v) idx |= static_cast<std::uint64_t>(bits[v] & 1U) << v;
    return idx;
  }

  std::string to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t v = 0; v < bits.size(); ++v) s[bits.size() - 1 - v] = bits[v] ? '1' : '0';
    return s;
  }

  Partition complement() const {
    Partition c = *this;
    for (auto& b : c.bits) b ^= 1U;
    return c;
  }

  void flip(std::size_t v) { bits[v] ^= 1U; }

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct CutResult {
  Partition partition;
  int cut_value = 0;

  friend bool operator==(const CutResult&, const CutResult&) = default;
};

inline int cut_value(const Graph& g, const Partition& part) {
  if (static_cast<int>(part.size()) != g.n()) {
    throw InvalidArgument("partition length " + std::to_string(part.size()) + " does not match vertex count " +
                          std::to_string(g.n()));
  }
  int cut = 0;
  for (const Edge& e : g.edges()) cut += part[e.u] != part[e.v] ? 1 : 0;
  return cut;
}

/// Cut value of the partition encoded by the bits of a basis index.
inline int cut_value_of_index(const Graph& g, std::uint64_t index) {
  int cut = 0;
  for (const Edge& e : g.edges()) cut += static_cast<int>(((index >> e.u) ^ (index >> e.v)) & 1U);
  return cut;
}

/// Cut value for every one of the 2^n basis indices, built incrementally from
/// the highest set bit so the whole table costs O(2^n).
inline std::vector<std::uint16_t> cut_table(const Graph& g) {
  const int n = g.n();
  if (n > kMaxEnumerableVertices) throw InvalidArgument("cut table limited to " + std::to_string(kMaxEnumerableVertices) + " vertices");
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= std::uint64_t{1} << e.v;
    adj[e.v] |= std::uint64_t{1} << e.u;
  }
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint16_t> table(size, 0);
  for (std::uint64_t i = 1; i < size; ++i) {
    const int top = std::bit_width(i) - 1;
    const std::uint64_t rest = i ^ (std::uint64_t{1} << top);
    // Moving `top` to side 1 cuts its edges to side-0 neighbours and uncuts those to side-1 neighbours.
    const int delta = std::popcount(adj[top]) - 2 * std::popcount(adj[top] & rest);
    table[i] = static_cast<std::uint16_t>(table[rest] + delta);
  }
  return table;
}

/// G(n, p): each pair (u, v), u < v, visited in lexicographic order consumes
/// exactly one engine draw and is kept when the draw is below edge_prob.
inline Graph generate_erdos_renyi(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("vertex count must be at least 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw InvalidArgument("edge probability must lie in [0, 1], got " + std::to_string(edge_prob));
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (uniform01(rng) < edge_prob) edges.push_back({u, v});
    }
  }
  return Graph(n, std::move(edges), seed);
}

/// Exact MaxCut by enumeration with vertex 0 pinned to side 0. Ties go to the
/// smallest assignment read as an integer.
inline CutResult brute_force_maxcut(const Graph& g) {
  const int n = g.n();
  if (n > kMaxEnumerableVertices) {
    throw InvalidArgument("instance too large for oracle: n=" + std::to_string(n) + " exceeds " +
                          std::to_string(kMaxEnumerableVertices));
  }
  std::uint64_t best_index = 0;
  int best_cut = -1;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t m = 0; m < count; ++m) {
    const std::uint64_t index = m << 1;
    const int cut = cut_value_of_index(g, index);
    if (cut > best_cut) {
      best_cut = cut;
      best_index = index;
    }
  }
  return {Partition::from_index(best_index, n), best_cut};
}

/// Gain in cut value from moving vertex v to the other side.
inline std::vector<int> flip_gains(const Graph& g, const Partition& part) {
  std::vector<int> gain(static_cast<std::size_t>(g.n()), 0);
  for (const Edge& e : g.edges()) {
    const int delta = part[e.u] == part[e.v] ? 1 : -1;
    gain[e.u] += delta;
    gain[e.v] += delta;
  }
  return gain;
}

/// True when no single-vertex move increases the cut, i.e. every vertex has at
/// least as many cut incident edges as uncut ones.
inline bool is_one_exchange_optimal(const Graph& g, const Partition& part) {
  for (int gain : flip_gains(g, part)) {
    if (gain > 0) return false;
  }
  return true;
}

/// Steepest-ascent one-exchange local search from a given start partition.
inline CutResult one_exchange_from(const Graph& g, Partition start) {
  if (static_cast<int>(start.size()) != g.n()) throw InvalidArgument("start partition length does not match vertex count");
  Partition part = std::move(start);
  for (;;) {
    const std::vector<int> gain = flip_gains(g, part);
    int best_v = -1;
    int best_gain = 0;
    for (int v = 0; v < g.n(); ++v) {
      if (gain[v] > best_gain) {
        best_gain = gain[v];
        best_v = v;
      }
    }
    if (best_v < 0) break;
    part.flip(static_cast<std::size_t>(best_v));
  }
  const int cut = cut_value(g, part);
  return {std::move(part), cut};
}

/// One-exchange local search from a seeded uniformly random partition.
inline CutResult one_exchange_maxcut(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.n()));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return one_exchange_from(g, Partition(std::move(bits)));
}

}  // namespace qaoa
