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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaoa/errors.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/statevector.hpp"

namespace qaoa {

/// Depth-p angles. The flat optimizer vector is [gamma_1..gamma_p, beta_1..beta_p].
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  QaoaParams() = default;
  QaoaParams(std::vector<double> g, std::vector<double> b) : gammas(std::move(g)), betas(std::move(b)) { validate(); }

  int depth() const { return static_cast<int>(gammas.size()); }

  void validate() const {
    if (gammas.empty()) throw InvalidArgument("QAOA depth must be at least 1");
    if (gammas.size() != betas.size()) throw InvalidArgument("gammas and betas must both have length p");
    for (double x : gammas) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite gamma");
    }
    for (double x : betas) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite beta");
    }
  }

  static QaoaParams zeros(int p) {
    if (p < 1) throw InvalidArgument("QAOA depth must be at least 1, got " + std::to_string(p));
    return {std::vector<double>(static_cast<std::size_t>(p), 0.0), std::vector<double>(static_cast<std::size_t>(p), 0.0)};
  }

  static QaoaParams from_vector(std::span<const double> x) {
    if (x.empty() || x.size() % 2 != 0) throw InvalidArgument("parameter vector must have even, non-zero length 2p");
    const std::size_t p = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)),
            std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(p), x.end())};
  }

  std::vector<double> to_vector() const {
    std::vector<double> x = gammas;
    x.insert(x.end(), betas.begin(), betas.end());
    return x;
  }

  friend bool operator==(const QaoaParams&, const QaoaParams&) = default;
};

inline nlohmann::ordered_json params_to_json(const QaoaParams& params) {
  nlohmann::ordered_json j;
  j["p"] = params.depth();
  j["gammas"] = params.gammas;
  j["betas"] = params.betas;
  return j;
}

inline QaoaParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("gammas") || !j.contains("betas")) {
    throw FormatError("QAOA parameters need fields \"p\", \"gammas\", \"betas\"");
  }
  if (!j["p"].is_number_integer() || !j["gammas"].is_array() || !j["betas"].is_array()) {
    throw FormatError("QAOA parameters have wrong field types");
  }
  QaoaParams params;
  try {
    params = QaoaParams(j["gammas"].get<std::vector<double>>(), j["betas"].get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("QAOA parameters: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("QAOA parameters: ") + e.what());
  }
  if (j["p"].get<long long>() != params.depth()) throw FormatError("QAOA parameters: \"p\" does not match angle count");
  return params;
}

/// Reference construction, gate by gate: plus state, then for each layer one
/// exp(-i gamma Z_u Z_v) per edge in canonical order followed by RX(2 beta) on
/// every qubit.
inline StateVector prepare_qaoa_state(const Graph& g, const QaoaParams& params) {
  params.validate();
  StateVector s = plus_state(g.n());
  for (int k = 0; k < params.depth(); ++k) {
    for (const Edge& e : g.edges()) apply_zz(s, e.u, e.v, params.gammas[k]);
    for (int q = 0; q < g.n(); ++q) apply_rx(s, q, 2.0 * params.betas[k]);
  }
  return s;
}

/// Identifies one parameterized gate occurrence and an extra angle added to it.
struct GateShift {
  enum class Kind { cost, mixer };
  Kind kind = Kind::cost;
  int layer = 0;
  int index = 0;  // edge index for cost gates, qubit for mixer gates
  double delta = 0.0;  // added to gamma_k (cost) or beta_k (mixer) for this occurrence only
};

/// QAOA circuit bound to one graph. The cost layer is applied as a single
/// diagonal pass using the cut table; this equals the product of per-edge ZZ
/// gates exactly in exact arithmetic (and to ~1e-15 in floating point).
class QaoaCircuit {
 public:
  explicit QaoaCircuit(Graph g) : graph_(std::move(g)), cuts_(cut_table(graph_)) {}

  const Graph& graph() const { return graph_; }
  int num_qubits() const { return graph_.n(); }
  int num_edges() const { return graph_.num_edges(); }
  std::span<const std::uint16_t> cuts() const { return cuts_; }

  /// Circuit runs per parameter-shift gradient: 2 (|E| + n) p.
  std::size_t shift_runs_per_gradient(int p) const {
    return 2 * static_cast<std::size_t>(num_edges() + num_qubits()) * static_cast<std::size_t>(p);
  }

  StateVector prepare(const QaoaParams& params) const {
    params.validate();
    StateVector s = plus_state(num_qubits());
    run_layers(s, params, 0);
    return s;
  }

  double energy(const StateVector& s) const { return expected_zz_sum(s, cuts_, num_edges()); }

  /// Sum of <Z_u Z_v> over edges; the minimized objective.
  double objective(const QaoaParams& params) const { return energy(prepare(params)); }

  /// Objective with a single gate occurrence's angle shifted, re-simulated
  /// from the start.
  double objective_with_shift(const QaoaParams& params, const GateShift& shift) const {
    params.validate();
    check_shift(params, shift);
    StateVector s = plus_state(num_qubits());
    for (int k = 0; k < params.depth(); ++k) {
      cost_layer(s, params.gammas[k]);
      if (shift.kind == GateShift::Kind::cost && shift.layer == k) {
        const Edge& e = graph_.edges()[static_cast<std::size_t>(shift.index)];
        apply_zz(s, e.u, e.v, shift.delta);
      }
      mixer_layer(s, params.betas[k]);
      if (shift.kind == GateShift::Kind::mixer && shift.layer == k) apply_rx(s, shift.index, 2.0 * shift.delta);
    }
    return energy(s);
  }

  /// Exact gradient by the two-term shift rule applied to every gate
  /// occurrence. Each generator (Z_u Z_v for cost gates, X_q for mixer gates
  /// in the exp(-i beta X) form) has eigenvalues +-1, so the shift is pi/4 on
  /// gamma or beta and the coefficient is 1:
  ///   d f / d theta = sum_occurrences [f(theta_occ + pi/4) - f(theta_occ - pi/4)].
  /// Every shifted circuit is simulated on its own; they share the state up to
  /// the end of the shifted gate's layer. Gates inside one layer commute, so the
  /// shifted gate's extra rotation can be moved to the end of its layer. A ZZ
  /// shift is carried one step further, past the mixer, as the two-qubit gate
  /// (RX_u RX_v) ZZ (RX_u RX_v)^dagger. Summation order is fixed (edge/qubit
  /// index, then +shift before -shift).
  std::vector<double> parameter_shift_gradient(const QaoaParams& params) const {
    params.validate();
    constexpr double shift = std::numbers::pi / 4.0;
    const int p = params.depth();
    std::vector<double> grad(static_cast<std::size_t>(2 * p), 0.0);
    StateVector psi = plus_state(num_qubits());
    StateVector t = psi;
    for (int k = 0; k < p; ++k) {
      cost_layer(psi, params.gammas[k]);
      mixer_layer(psi, params.betas[k]);
      const Gate2 moved[2] = {mixed_zz(params.betas[k], shift), mixed_zz(params.betas[k], -shift)};
      double dg = 0.0;
      for (const Edge& e : graph_.edges()) {
        double f[2];
        for (int side = 0; side < 2; ++side) {
          apply_two_qubit(psi, t, e.u, e.v, moved[side]);
          run_layers(t, params, k + 1);
          f[side] = energy(t);
        }
        dg += f[0] - f[1];
      }
      grad[static_cast<std::size_t>(k)] = dg;

      double db = 0.0;
      for (int q = 0; q < num_qubits(); ++q) {
        double f[2];
        for (int side = 0; side < 2; ++side) {
          t = psi;
          apply_rx(t, q, 2.0 * (side == 0 ? shift : -shift));
          run_layers(t, params, k + 1);
          f[side] = energy(t);
        }
        db += f[0] - f[1];
      }
      grad[static_cast<std::size_t>(p + k)] = db;
    }
    return grad;
  }

  /// (RX(2 beta) x RX(2 beta)) exp(-i phi Z x Z) (RX(2 beta) x RX(2 beta))^dagger.
  static Gate2 mixed_zz(double beta, double phi) {
    const Amplitude c(std::cos(beta), 0.0);
    const Amplitude s(0.0, -std::sin(beta));
    const Amplitude r[2][2] = {{c, s}, {s, c}};
    Gate2 rr{};
    Gate2 d{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) rr[4 * i + j] = r[i & 1][j & 1] * r[i >> 1][j >> 1];
      d[5 * i] = std::polar(1.0, ((i & 1) == (i >> 1)) ? -phi : phi);
    }
    return gate2_product(gate2_product(rr, d), gate2_adjoint(rr));
  }

  void cost_layer(StateVector& s, double gamma) const {
    const int m = num_edges();
    std::vector<Amplitude> phases(static_cast<std::size_t>(m) + 1);
    for (int c = 0; c <= m; ++c) phases[static_cast<std::size_t>(c)] = std::polar(1.0, -gamma * (m - 2 * c));
    apply_labeled_phases(s, cuts_, phases);
  }

  void mixer_layer(StateVector& s, double beta) const { apply_rx_all(s, 2.0 * beta); }

 private:
  void run_layers(StateVector& s, const QaoaParams& params, int first_layer) const {
    for (int k = first_layer; k < params.depth(); ++k) {
      cost_layer(s, params.gammas[k]);
      mixer_layer(s, params.betas[k]);
    }
  }

  void check_shift(const QaoaParams& params, const GateShift& shift) const {
    if (shift.layer < 0 || shift.layer >= params.depth()) throw InvalidArgument("shifted layer out of range");
    const int limit = shift.kind == GateShift::Kind::cost ? num_edges() : num_qubits();
    if (shift.index < 0 || shift.index >= limit) throw InvalidArgument("shifted gate index out of range");
  }

  Graph graph_;
  std::vector<std::uint16_t> cuts_;
};

inline double qaoa_objective(const Graph& g, const QaoaParams& params) { return QaoaCircuit(g).objective(params); }

inline std::vector<double> parameter_shift_gradient(const QaoaCircuit& circuit, const QaoaParams& params) {
  return circuit.parameter_shift_gradient(params);
}

struct QaoaSolution {
  double expected_cut = 0.0;
  CutResult best_sampled;
  CutResult most_probable;
  QaoaParams params;
  std::uint64_t shots = 0;
};

/// Samples the optimized state and reads classical cuts out of it. Ties in
/// both the best cut and the highest count go to the smaller basis index.
inline QaoaSolution extract_solution(const QaoaCircuit& circuit, const QaoaParams& params, std::uint64_t shots,
                                     std::uint64_t seed) {
  if (shots == 0) throw InvalidArgument("shot count must be positive");
  const StateVector s = circuit.prepare(params);
  const auto counts = sample_index_counts(s, shots, seed);
  const int n = circuit.num_qubits();
  const auto cuts = circuit.cuts();

  std::uint64_t best_idx = 0, frequent_idx = 0, frequent_count = 0;
  int best_cut = -1;
  for (const auto& [idx, c] : counts) {
    if (cuts[idx] > best_cut) {
      best_cut = cuts[idx];
      best_idx = idx;
    }
    if (c > frequent_count) {
      frequent_count = c;
      frequent_idx = idx;
    }
  }
  QaoaSolution sol;
  sol.expected_cut = 0.5 * (circuit.num_edges() - circuit.energy(s));
  sol.best_sampled = {Partition::from_index(best_idx, n), static_cast<int>(cuts[best_idx])};
  sol.most_probable = {Partition::from_index(frequent_idx, n), static_cast<int>(cuts[frequent_idx])};
  sol.params = params;
  sol.shots = shots;
  return sol;
}

inline QaoaSolution extract_solution(const Graph& g, const QaoaParams& params, std::uint64_t shots, std::uint64_t seed) {
  return extract_solution(QaoaCircuit(g), params, shots, seed);
}

}  // namespace qaoa
