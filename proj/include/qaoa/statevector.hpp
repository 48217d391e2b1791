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
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaoa/errors.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = kMaxEnumerableVertices;

/// Dense n-qubit pure state. Qubit q is bit q of the basis index
/// (little-endian); bit value 0 is the +1 eigenstate of Z.
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(int n_qubits) : n_qubits_(check_size(n_qubits)), amps_(std::size_t{1} << n_qubits_) {
    amps_[0] = 1.0;
  }

  static StateVector basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.size()) throw InvalidArgument("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(std::vector<Amplitude> amps) {
    const std::size_t size = amps.size();
    if (size < 2 || (size & (size - 1)) != 0) throw InvalidArgument("amplitude count must be a power of two >= 2");
    StateVector s(std::countr_zero(size));
    s.amps_ = std::move(amps);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double sum = 0.0;
    for (const Amplitude& a : amps_) sum += std::norm(a);
    return std::sqrt(sum);
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  void check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) {
      throw InvalidArgument("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
  }

 private:
  static int check_size(int n) {
    if (n < 1 || n > kMaxQubits) {
      throw InvalidArgument("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " + std::to_string(n));
    }
    return n;
  }

  int n_qubits_;
  std::vector<Amplitude> amps_;
};

namespace detail {

// Calls f(i0, i1) for every index pair differing only in bit q, with bit q of i0 clear.
template <class F>
inline void for_each_pair(std::size_t size, int q, F&& f) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < size; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) f(i, i + stride);
  }
}

// Plain complex product; std::complex operator* adds NaN/inf recovery that
// costs a library call per element.
inline Amplitude mul(Amplitude a, Amplitude b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace detail

/// Uniform superposition H^n |0...0>.
inline StateVector plus_state(int n) {
  StateVector s(n);
  const double a = std::pow(2.0, -0.5 * n);
  for (Amplitude& x : s.amplitudes()) x = a;
  return s;
}

inline void apply_hadamard(StateVector& s, int q) {
  s.check_qubit(q);
  const double r = 1.0 / std::sqrt(2.0);
  auto amps = s.amplitudes();
  detail::for_each_pair(amps.size(), q, [&](std::size_t i0, std::size_t i1) {
    const Amplitude a0 = amps[i0];
    const Amplitude a1 = amps[i1];
    amps[i0] = r * (a0 + a1);
    amps[i1] = r * (a0 - a1);
  });
}

/// exp(-i theta X / 2) on qubit q.
inline void apply_rx(StateVector& s, int q, double theta) {
  s.check_qubit(q);
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  auto amps = s.amplitudes();
  detail::for_each_pair(amps.size(), q, [&](std::size_t i0, std::size_t i1) {
    const double x0 = amps[i0].real(), y0 = amps[i0].imag();
    const double x1 = amps[i1].real(), y1 = amps[i1].imag();
    amps[i0] = Amplitude(c * x0 + sn * y1, c * y0 - sn * x1);
    amps[i1] = Amplitude(c * x1 + sn * y0, c * y1 - sn * x0);
  });
}

namespace detail {

struct RxCoeffs {
  double c;
  double s;
};

inline void rx_pair(Amplitude& a0, Amplitude& a1, RxCoeffs k) {
  const double x0 = a0.real(), y0 = a0.imag();
  const double x1 = a1.real(), y1 = a1.imag();
  a0 = Amplitude(k.c * x0 + k.s * y1, k.c * y0 - k.s * x1);
  a1 = Amplitude(k.c * x1 + k.s * y0, k.c * y1 - k.s * x0);
}

// Runtime dispatch to an AVX2 build of the hottest kernel. Element-wise
// arithmetic without contraction rounds identically in every clone.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && !defined(QAOA_NO_TARGET_CLONES)
#define QAOA_KERNEL_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define QAOA_KERNEL_CLONES
#endif

/// rx_pair over two disjoint runs of n amplitudes, on raw interleaved doubles
/// so the loop vectorizes.
inline void rx_run(Amplitude* a0, Amplitude* a1, std::size_t n, RxCoeffs k) {
  double* __restrict p0 = reinterpret_cast<double*>(a0);
  double* __restrict p1 = reinterpret_cast<double*>(a1);
  const double c = k.c, s = k.s;
  for (std::size_t j = 0; j < 2 * n; j += 2) {
    const double x0 = p0[j], y0 = p0[j + 1], x1 = p1[j], y1 = p1[j + 1];
    p0[j] = c * x0 + s * y1;
    p0[j + 1] = c * y0 - s * x1;
    p1[j] = c * x1 + s * y0;
    p1[j + 1] = c * y1 - s * x0;
  }
}

}  // namespace detail

/// RX(theta) on every qubit, in qubit order 0..n-1. Low qubits are applied
/// block by block while the block is cache resident. High qubits are applied
/// on column tiles: a few contiguous low indices across every high row.
/// Each amplitude sees exactly the arithmetic of n successive apply_rx calls,
/// so the result is bit-identical to that loop.
namespace detail {

QAOA_KERNEL_CLONES inline void rx_all_kernel(Amplitude* amps, int n, RxCoeffs k) {
  const std::size_t size = std::size_t{1} << n;
  constexpr int kBlockQubits = 12;
  constexpr int kTileQubits = 13;
  const int low = std::min(n, kBlockQubits);
  const std::size_t block = std::size_t{1} << low;
  for (std::size_t base = 0; base < size; base += block) {
    Amplitude* b = amps + base;
    for (int q = 0; q < low; ++q) {
      const std::size_t stride = std::size_t{1} << q;
      for (std::size_t i = 0; i < block; i += 2 * stride) rx_run(b + i, b + i + stride, stride, k);
    }
  }
  const int high = n - low;
  if (high == 0) return;
  const std::size_t rows = std::size_t{1} << high;
  const std::size_t width = std::min(block, std::size_t{1} << std::max(3, kTileQubits - high));
  for (std::size_t c0 = 0; c0 < block; c0 += width) {
    Amplitude* tile = amps + c0;
    for (int h = 0; h < high; ++h) {
      const std::size_t rs = std::size_t{1} << h;
      for (std::size_t r0 = 0; r0 < rows; r0 += 2 * rs) {
        for (std::size_t r = r0; r < r0 + rs; ++r) rx_run(tile + (r << low), tile + ((r + rs) << low), width, k);
      }
    }
  }
}

}  // namespace detail

inline void apply_rx_all(StateVector& s, double theta) {
  detail::rx_all_kernel(s.amplitudes().data(), s.n_qubits(), {std::cos(0.5 * theta), std::sin(0.5 * theta)});
}

/// diag(exp(-i theta/2), exp(+i theta/2)) on qubit q.
inline void apply_rz(StateVector& s, int q, double theta) {
  s.check_qubit(q);
  const Amplitude p0 = std::polar(1.0, -0.5 * theta);
  const Amplitude p1 = std::polar(1.0, 0.5 * theta);
  auto amps = s.amplitudes();
  detail::for_each_pair(amps.size(), q, [&](std::size_t i0, std::size_t i1) {
    amps[i0] = detail::mul(amps[i0], p0);
    amps[i1] = detail::mul(amps[i1], p1);
  });
}

inline void apply_cnot(StateVector& s, int control, int target) {
  s.check_qubit(control);
  s.check_qubit(target);
  if (control == target) throw InvalidArgument("CNOT control and target must differ");
  const std::size_t cbit = std::size_t{1} << control;
  auto amps = s.amplitudes();
  detail::for_each_pair(amps.size(), target, [&](std::size_t i0, std::size_t i1) {
    if (i0 & cbit) std::swap(amps[i0], amps[i1]);
  });
}

/// exp(-i gamma Z_u Z_v): phase exp(-i gamma) where bits u and v agree,
/// exp(+i gamma) where they differ.
inline void apply_zz(StateVector& s, int u, int v, double gamma) {
  s.check_qubit(u);
  s.check_qubit(v);
  if (u == v) throw InvalidArgument("ZZ qubits must differ");
  const Amplitude same = std::polar(1.0, -gamma);
  const Amplitude diff = std::polar(1.0, gamma);
  auto amps = s.amplitudes();
  const Amplitude phase[2] = {same, diff};
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = detail::mul(amps[i], phase[((i >> u) ^ (i >> v)) & 1U]);
}

/// Row-major 4x4 unitary on two qubits. Local basis index is bit_a + 2 bit_b.
using Gate2 = std::array<Amplitude, 16>;

inline Gate2 gate2_product(const Gate2& x, const Gate2& y) {
  Gate2 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[4 * i + j] += x[4 * i + k] * y[4 * k + j];
  return r;
}

inline Gate2 gate2_adjoint(const Gate2& x) {
  Gate2 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[4 * i + j] = std::conj(x[4 * j + i]);
  return r;
}

namespace detail {

struct Gate2Parts {
  double re[16];
  double im[16];
};

inline Gate2Parts split(const Gate2& m) {
  Gate2Parts g;
  for (int i = 0; i < 16; ++i) {
    g.re[i] = m[i].real();
    g.im[i] = m[i].imag();
  }
  return g;
}

// Quads of indices with bits a and b clear, visited so that the innermost
// loop walks a contiguous run of min(2^a, 2^b) indices. in and out may alias.
QAOA_KERNEL_CLONES inline void two_qubit_kernel(const Amplitude* in, Amplitude* out, int n, int a, int b,
                                                const Gate2Parts& g) {
  const std::size_t size = std::size_t{1} << n;
  const std::size_t ma = std::size_t{1} << a;
  const std::size_t mb = std::size_t{1} << b;
  const std::size_t lo = std::min(ma, mb);
  const std::size_t hi = std::max(ma, mb);
  const std::size_t off[4] = {0, ma, mb, ma | mb};
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  for (std::size_t i2 = 0; i2 < size; i2 += 2 * hi) {
    for (std::size_t i1 = i2; i1 < i2 + hi; i1 += 2 * lo) {
      const double* x[4];
      double* y[4];
      for (int c = 0; c < 4; ++c) {
        x[c] = src + 2 * (i1 + off[c]);
        y[c] = dst + 2 * (i1 + off[c]);
      }
      for (std::size_t j = 0; j < 2 * lo; j += 2) {
        const double xr0 = x[0][j], xi0 = x[0][j + 1], xr1 = x[1][j], xi1 = x[1][j + 1];
        const double xr2 = x[2][j], xi2 = x[2][j + 1], xr3 = x[3][j], xi3 = x[3][j + 1];
        for (int r = 0; r < 4; ++r) {
          const double* gr = g.re + 4 * r;
          const double* gi = g.im + 4 * r;
          const double yr = gr[0] * xr0 - gi[0] * xi0 + gr[1] * xr1 - gi[1] * xi1 + gr[2] * xr2 - gi[2] * xi2 +
                            gr[3] * xr3 - gi[3] * xi3;
          const double yi = gr[0] * xi0 + gi[0] * xr0 + gr[1] * xi1 + gi[1] * xr1 + gr[2] * xi2 + gi[2] * xr2 +
                            gr[3] * xi3 + gi[3] * xr3;
          y[r][j] = yr;
          y[r][j + 1] = yi;
        }
      }
    }
  }
}

inline void check_pair(const StateVector& s, int a, int b) {
  s.check_qubit(a);
  s.check_qubit(b);
  if (a == b) throw InvalidArgument("two-qubit gate qubits must differ");
}

}  // namespace detail

/// Applies a two-qubit gate to qubits (a, b).
inline void apply_two_qubit(StateVector& s, int a, int b, const Gate2& m) {
  detail::check_pair(s, a, b);
  detail::two_qubit_kernel(s.amplitudes().data(), s.amplitudes().data(), s.n_qubits(), a, b, detail::split(m));
}

/// out = gate applied to in, leaving in unchanged.
inline void apply_two_qubit(const StateVector& in, StateVector& out, int a, int b, const Gate2& m) {
  detail::check_pair(in, a, b);
  if (out.n_qubits() != in.n_qubits()) out = in;
  detail::two_qubit_kernel(in.amplitudes().data(), out.amplitudes().data(), in.n_qubits(), a, b, detail::split(m));
}

/// Multiplies amplitude i by phases[labels[i]]. Used for diagonal operators
/// whose eigenvalue depends on a small integer label per basis state.
inline void apply_labeled_phases(StateVector& s, std::span<const std::uint16_t> labels,
                                 std::span<const Amplitude> phases) {
  if (labels.size() != s.size()) throw InvalidArgument("label table size does not match state size");
  auto amps = s.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = detail::mul(amps[i], phases[labels[i]]);
}

/// <s| sum_{(u,v) in E} Z_u Z_v |s>, given a precomputed cut table.
inline double expected_zz_sum(const StateVector& s, std::span<const std::uint16_t> cuts, int num_edges) {
  if (cuts.size() != s.size()) throw InvalidArgument("cut table size does not match state size");
  auto amps = s.amplitudes();
  double sum = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) sum += std::norm(amps[i]) * (num_edges - 2 * static_cast<int>(cuts[i]));
  return sum;
}

inline double expected_zz_sum(const StateVector& s, const Graph& g) {
  if (g.n() != s.n_qubits()) {
    throw InvalidArgument("graph has " + std::to_string(g.n()) + " vertices but state has " +
                          std::to_string(s.n_qubits()) + " qubits");
  }
  auto amps = s.amplitudes();
  const int m = g.num_edges();
  double sum = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) sum += std::norm(amps[i]) * (m - 2 * cut_value_of_index(g, i));
  return sum;
}

/// (|E| - <H_C>) / 2.
inline double expected_cut(const StateVector& s, const Graph& g) {
  return 0.5 * (g.num_edges() - expected_zz_sum(s, g));
}

/// Basis label with qubit n-1 first, so basis index 1 of two qubits is "01".
inline std::string basis_label(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1U) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  }
  return s;
}

struct SampleCounts {
  int n_qubits = 0;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_shots = 0;
};

/// Seeded i.i.d. draws of basis indices from |amp_i|^2, as index -> count.
inline std::map<std::uint64_t, std::uint64_t> sample_index_counts(const StateVector& s, std::uint64_t shots,
                                                                   std::uint64_t seed) {
  if (shots == 0) throw InvalidArgument("shot count must be positive");
  auto amps = s.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p > 0.0) last_nonzero = i;
    acc += p;
    cdf[i] = acc;
  }
  Rng rng(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
    ++counts[idx];
  }
  return counts;
}

inline SampleCounts sample_bitstrings(const StateVector& s, std::uint64_t shots, std::uint64_t seed) {
  SampleCounts out;
  out.n_qubits = s.n_qubits();
  out.total_shots = shots;
  for (const auto& [idx, c] : sample_index_counts(s, shots, seed)) out.counts[basis_label(idx, s.n_qubits())] = c;
  return out;
}

/// Debug dump: [[re, im], ...].
inline nlohmann::json amplitudes_to_json(const StateVector& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Amplitude& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

}  // namespace qaoa
