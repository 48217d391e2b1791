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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaoa/ansatz.hpp"
#include "qaoa/errors.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

/// Scalar objective with an evaluation counter.
class Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Objective(std::size_t arity, Fn fn) : arity_(arity), fn_(std::move(fn)) {}

  double operator()(std::span<const double> x) {
    if (x.size() != arity_) throw InvalidArgument("objective called with wrong parameter count");
    ++eval_count_;
    return fn_(x);
  }

  std::size_t arity() const { return arity_; }
  std::uint64_t eval_count() const { return eval_count_; }

 private:
  std::size_t arity_;
  Fn fn_;
  std::uint64_t eval_count_ = 0;
};

/// Gradient oracle with a call counter.
class Gradient {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;

  explicit Gradient(Fn fn) : fn_(std::move(fn)) {}

  std::vector<double> operator()(std::span<const double> x) {
    ++eval_count_;
    std::vector<double> g = fn_(x);
    if (g.size() != x.size()) throw InvalidArgument("gradient size does not match parameter count");
    return g;
  }

  std::uint64_t eval_count() const { return eval_count_; }

 private:
  Fn fn_;
  std::uint64_t eval_count_ = 0;
};

enum class Method { bfgs, nelder_mead };

inline std::string method_name(Method m) { return m == Method::bfgs ? "bfgs" : "nelder-mead"; }

inline Method parse_method(const std::string& name) {
  if (name == "bfgs") return Method::bfgs;
  if (name == "nelder-mead") return Method::nelder_mead;
  throw InvalidArgument("unknown optimizer '" + name + "' (expected bfgs or nelder-mead)");
}

struct OptimizerConfig {
  Method method = Method::bfgs;
  int max_iters = 0;  // 0 selects the method default: 200 (BFGS), 200 * dim (Nelder-Mead)
  double grad_tol = 1e-5;
  double f_tol = 1e-4;
  double x_tol = 1e-4;
  int restarts = 1;
  std::uint64_t init_seed = 0;

  // Strong-Wolfe line search.
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search_steps = 20;
  double curvature_skip = 1e-10;

  // Nelder-Mead coefficients.
  double nm_reflect = 1.0;
  double nm_expand = 2.0;
  double nm_contract = 0.5;
  double nm_shrink = 0.5;
  double nm_initial_step = 0.05;

  void validate() const {
    if (!(grad_tol > 0) || !(f_tol > 0) || !(x_tol > 0)) throw InvalidArgument("optimizer tolerances must be positive");
    if (max_iters < 0) throw InvalidArgument("max_iters must be non-negative");
    if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
    if (!(0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1)) throw InvalidArgument("need 0 < c1 < c2 < 1");
    if (max_line_search_steps < 1) throw InvalidArgument("line search needs at least one trial step");
  }
};

struct TracePoint {
  int iteration = 0;
  double value = 0.0;
};

struct OptimizeResult {
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;
  std::uint64_t n_evals = 0;
  std::uint64_t n_grad_evals = 0;
  double wall_time_seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// Trace entries are [iteration, value] pairs.
inline nlohmann::ordered_json optimize_result_to_json(const OptimizeResult& r) {
  nlohmann::ordered_json j;
  j["best_params"] = r.best_params;
  j["best_value"] = r.best_value;
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const TracePoint& t : r.trace) trace.push_back({t.iteration, t.value});
  j["trace"] = std::move(trace);
  j["n_evals"] = r.n_evals;
  j["n_grad_evals"] = r.n_grad_evals;
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["line_search_failed"] = r.line_search_failed;
  return j;
}

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
template <class F>
std::vector<double> finite_difference_gradient(F&& f, std::span<const double> x, double h = 1e-5) {
  if (!(h > 0)) throw InvalidArgument("finite-difference step must be positive");
  std::vector<double> grad(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(std::span<const double>(probe));
    probe[i] = x[i] - h;
    const double fm = f(std::span<const double>(probe));
    probe[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;  // 0 means no acceptable point was found
  double value = 0.0;
  std::vector<double> grad;
};

// Strong-Wolfe search along d from x (bracketing, then zoom with safeguarded
// quadratic interpolation). The gradient is only evaluated at trial points
// that already satisfy sufficient decrease.
inline LineSearchResult strong_wolfe(Objective& f, Gradient& grad, std::span<const double> x,
                                     std::span<const double> d, double f0, double dphi0,
                                     const OptimizerConfig& cfg) {
  constexpr double kAlphaMax = 1e3;
  std::vector<double> trial(x.size());
  auto point = [&](double alpha) -> std::span<const double> {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
    return trial;
  };
  auto armijo = [&](double alpha, double value) { return value <= f0 + cfg.wolfe_c1 * alpha * dphi0; };
  const double curvature_bound = -cfg.wolfe_c2 * dphi0;

  int trials = 0;

  auto zoom = [&](double lo, double f_lo, double dphi_lo, std::vector<double> g_lo, double hi,
                  double f_hi) -> LineSearchResult {
    while (trials < cfg.max_line_search_steps) {
      const double width = hi - lo;
      if (std::abs(width) < 1e-14) break;
      // Minimizer of the quadratic through (lo, f_lo, dphi_lo) and (hi, f_hi).
      const double denom = 2.0 * (f_hi - f_lo - dphi_lo * width);
      double alpha = denom > 0 ? lo - dphi_lo * width * width / denom : lo + 0.5 * width;
      const double a = std::min(lo, hi), b = std::max(lo, hi);
      const double margin = 0.1 * (b - a);
      if (!(alpha > a + margin && alpha < b - margin)) alpha = lo + 0.5 * width;

      const double f_a = f(point(alpha));
      ++trials;
      if (!armijo(alpha, f_a) || f_a >= f_lo) {
        hi = alpha;
        f_hi = f_a;
        continue;
      }
      std::vector<double> g_a = grad(point(alpha));
      const double dphi_a = dot(g_a, d);
      if (std::abs(dphi_a) <= curvature_bound) return {true, alpha, f_a, std::move(g_a)};
      if (dphi_a * (hi - lo) >= 0) {
        hi = lo;
        f_hi = f_lo;
      }
      lo = alpha;
      f_lo = f_a;
      dphi_lo = dphi_a;
      g_lo = std::move(g_a);
    }
    if (lo > 0) return {false, lo, f_lo, std::move(g_lo)};
    return {};
  };

  double alpha_prev = 0.0, f_prev = f0, dphi_prev = dphi0;
  std::vector<double> g_prev;
  double alpha = 1.0;
  while (trials < cfg.max_line_search_steps) {
    const double f_a = f(point(alpha));
    ++trials;
    if (!armijo(alpha, f_a) || (alpha_prev > 0 && f_a >= f_prev)) {
      return zoom(alpha_prev, f_prev, dphi_prev, std::move(g_prev), alpha, f_a);
    }
    std::vector<double> g_a = grad(point(alpha));
    const double dphi_a = dot(g_a, d);
    if (std::abs(dphi_a) <= curvature_bound) return {true, alpha, f_a, std::move(g_a)};
    if (dphi_a >= 0) return zoom(alpha, f_a, dphi_a, std::move(g_a), alpha_prev, f_prev);
    alpha_prev = alpha;
    f_prev = f_a;
    dphi_prev = dphi_a;
    g_prev = std::move(g_a);
    if (alpha >= kAlphaMax) break;
    alpha = std::min(2.0 * alpha, kAlphaMax);
  }
  if (alpha_prev > 0) return {false, alpha_prev, f_prev, std::move(g_prev)};
  return {};
}

}  // namespace detail

/// BFGS with an inverse-Hessian update starting from the identity and a
/// strong-Wolfe line search. Stops when the max-norm of the gradient drops
/// below grad_tol or after max_iters iterations. A failed line search ends
/// the run at the best point reached and sets line_search_failed.
inline OptimizeResult bfgs_minimize(Objective& f, Gradient& grad, std::span<const double> x0,
                                    const OptimizerConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t evals0 = f.eval_count();
  const std::uint64_t grads0 = grad.eval_count();
  const std::size_t dim = x0.size();
  const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : 200;

  std::vector<double> x(x0.begin(), x0.end());
  double fx = f(x);
  std::vector<double> g = grad(x);
  std::vector<double> H(dim * dim, 0.0);
  auto reset_hessian = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) H[i * dim + i] = 1.0;
  };
  reset_hessian();

  OptimizeResult res;
  res.trace.push_back({0, fx});
  std::vector<double> d(dim), s(dim), y(dim), Hy(dim);
  int iter = 0;
  while (true) {
    if (detail::max_abs(g) < cfg.grad_tol) {
      res.converged = true;
      break;
    }
    if (iter >= max_iters) break;
    for (std::size_t i = 0; i < dim; ++i) {
      d[i] = 0.0;
      for (std::size_t j = 0; j < dim; ++j) d[i] -= H[i * dim + j] * g[j];
    }
    double dphi0 = detail::dot(g, d);
    if (!(dphi0 < 0)) {
      reset_hessian();
      for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
      dphi0 = detail::dot(g, d);
    }
    detail::LineSearchResult ls = detail::strong_wolfe(f, grad, x, d, fx, dphi0, cfg);
    if (ls.alpha > 0 && ls.value < fx) {
      ++iter;
      for (std::size_t i = 0; i < dim; ++i) {
        s[i] = ls.alpha * d[i];
        y[i] = ls.grad[i] - g[i];
        x[i] += s[i];
      }
      fx = ls.value;
      g = std::move(ls.grad);
      res.trace.push_back({iter, fx});
    }
    if (!ls.ok) {
      res.line_search_failed = true;
      break;
    }
    const double ys = detail::dot(y, s);
    if (ys > cfg.curvature_skip) {
      const double rho = 1.0 / ys;
      for (std::size_t i = 0; i < dim; ++i) {
        Hy[i] = 0.0;
        for (std::size_t j = 0; j < dim; ++j) Hy[i] += H[i * dim + j] * y[j];
      }
      const double yHy = detail::dot(y, Hy);
      const double ss_coef = rho * rho * yHy + rho;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          H[i * dim + j] += -rho * (s[i] * Hy[j] + Hy[i] * s[j]) + ss_coef * s[i] * s[j];
        }
      }
    }
  }
  res.best_params = std::move(x);
  res.best_value = fx;
  res.iterations = iter;
  res.n_evals = f.eval_count() - evals0;
  res.n_grad_evals = grad.eval_count() - grads0;
  res.wall_time_seconds = detail::seconds_since(start);
  return res;
}

/// Nelder-Mead simplex minimization. The initial simplex is x0 plus one vertex
/// per axis at x0 + step_i e_i, step_i = nm_initial_step * max(|x0_i|, 1).
/// Converged when both the spread of objective values and the largest
/// coordinate offset from the best vertex fall below f_tol and x_tol.
inline OptimizeResult nelder_mead_minimize(Objective& f, std::span<const double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t evals0 = f.eval_count();
  const std::size_t dim = x0.size();
  if (dim == 0) throw InvalidArgument("Nelder-Mead needs at least one parameter");
  const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : 200 * static_cast<int>(dim);

  // NaN sorts last.
  auto eval = [&](std::span<const double> x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> sim(dim + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < dim; ++i) sim[i + 1][i] += cfg.nm_initial_step * std::max(std::abs(x0[i]), 1.0);
  std::vector<double> fs(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) fs[k] = eval(sim[k]);

  auto sort_simplex = [&] {
    std::vector<std::size_t> order(dim + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> sorted_sim(dim + 1);
    std::vector<double> sorted_f(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      sorted_sim[k] = std::move(sim[order[k]]);
      sorted_f[k] = fs[order[k]];
    }
    sim = std::move(sorted_sim);
    fs = std::move(sorted_f);
  };

  OptimizeResult res;
  sort_simplex();
  res.trace.push_back({0, fs[0]});

  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  auto along = [&](std::vector<double>& out, double t, std::span<const double> toward) {
    for (std::size_t i = 0; i < dim; ++i) out[i] = centroid[i] + t * (toward[i] - centroid[i]);
  };

  int iter = 0;
  while (true) {
    double f_spread = 0.0, x_spread = 0.0;
    for (std::size_t k = 1; k <= dim; ++k) {
      f_spread = std::max(f_spread, std::abs(fs[k] - fs[0]));
      for (std::size_t i = 0; i < dim; ++i) x_spread = std::max(x_spread, std::abs(sim[k][i] - sim[0][i]));
    }
    if (f_spread < cfg.f_tol && x_spread < cfg.x_tol) {
      res.converged = true;
      break;
    }
    if (iter >= max_iters) break;
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += sim[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const std::vector<double>& worst = sim[dim];
    along(xr, -cfg.nm_reflect, worst);
    const double fr = eval(xr);
    bool shrink = false;
    if (fr < fs[0]) {
      along(xe, -cfg.nm_reflect * cfg.nm_expand, worst);
      const double fe = eval(xe);
      if (fe < fr) {
        sim[dim] = xe;
        fs[dim] = fe;
      } else {
        sim[dim] = xr;
        fs[dim] = fr;
      }
    } else if (fr < fs[dim - 1]) {
      sim[dim] = xr;
      fs[dim] = fr;
    } else if (fr < fs[dim]) {
      // Outside contraction toward the reflected point.
      along(xc, -cfg.nm_reflect * cfg.nm_contract, worst);
      const double fc = eval(xc);
      if (fc <= fr) {
        sim[dim] = xc;
        fs[dim] = fc;
      } else {
        shrink = true;
      }
    } else {
      // Inside contraction toward the worst vertex.
      along(xc, cfg.nm_contract, worst);
      const double fc = eval(xc);
      if (fc < fs[dim]) {
        sim[dim] = xc;
        fs[dim] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t k = 1; k <= dim; ++k) {
        for (std::size_t i = 0; i < dim; ++i) sim[k][i] = sim[0][i] + cfg.nm_shrink * (sim[k][i] - sim[0][i]);
        fs[k] = eval(sim[k]);
      }
    }
    sort_simplex();
    res.trace.push_back({iter, fs[0]});
  }
  res.best_params = sim[0];
  res.best_value = fs[0];
  res.iterations = iter;
  res.n_evals = f.eval_count() - evals0;
  res.wall_time_seconds = detail::seconds_since(start);
  return res;
}

/// Angles drawn uniformly from [0, pi): gammas first, then betas.
inline QaoaParams random_init(int p, std::uint64_t seed) {
  if (p < 1) throw InvalidArgument("QAOA depth must be at least 1, got " + std::to_string(p));
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(2 * p));
  for (double& v : x) v = std::numbers::pi * uniform01(rng);
  return QaoaParams::from_vector(x);
}

/// Seed of the r-th restart; restart 0 uses init_seed itself.
inline std::uint64_t restart_seed(std::uint64_t init_seed, int restart) {
  return restart == 0 ? init_seed : hash64({init_seed, static_cast<std::uint64_t>(restart)});
}

/// Minimizes the QAOA objective of a circuit from random_init starts, keeping
/// the best restart. The trace concatenates all restarts with a running
/// iteration number; counts and wall time cover the whole call.
inline OptimizeResult minimize_qaoa(const QaoaCircuit& circuit, int p, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = static_cast<std::size_t>(2 * p);
  Objective f(dim, [&](std::span<const double> x) { return circuit.objective(QaoaParams::from_vector(x)); });
  Gradient grad([&](std::span<const double> x) {
    return circuit.parameter_shift_gradient(QaoaParams::from_vector(x));
  });

  OptimizeResult best;
  std::vector<TracePoint> trace;
  int offset = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::vector<double> x0 = random_init(p, restart_seed(cfg.init_seed, r)).to_vector();
    OptimizeResult run =
        cfg.method == Method::bfgs ? bfgs_minimize(f, grad, x0, cfg) : nelder_mead_minimize(f, x0, cfg);
    for (const TracePoint& t : run.trace) trace.push_back({offset + t.iteration, t.value});
    offset += run.iterations + 1;
    if (r == 0 || run.best_value < best.best_value) best = std::move(run);
  }
  best.trace = std::move(trace);
  best.n_evals = f.eval_count();
  best.n_grad_evals = grad.eval_count();
  best.wall_time_seconds = detail::seconds_since(start);
  return best;
}

}  // namespace qaoa
