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

#include "qaoa/optimizers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gtest/gtest.h"

using namespace qaoa;

namespace {

constexpr double kPi = std::numbers::pi;

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

std::vector<double> rosenbrock_grad(std::span<const double> x) {
  return {-400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]), 200.0 * (x[1] - x[0] * x[0])};
}

double sphere(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<double> sphere_grad(std::span<const double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2 * x[i];
  return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> fd_qaoa(const QaoaCircuit& c, const QaoaParams& params, double h = 1e-5) {
  const std::vector<double> x = params.to_vector();
  return finite_difference_gradient(
      [&](std::span<const double> y) { return c.objective(QaoaParams::from_vector(y)); }, x, h);
}

}  // namespace

TEST(FiniteDifference, analytic_cases) {
  const std::vector<double> x{1.0, 2.0};
  const auto g = finite_difference_gradient(sphere, x);
  EXPECT_NEAR(g[0], 2.0, 1e-6);
  EXPECT_NEAR(g[1], 4.0, 1e-6);
  const auto z = finite_difference_gradient([](std::span<const double>) { return 3.0; }, x);
  EXPECT_EQ(z, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(finite_difference_gradient(sphere, x, 0.0), InvalidArgument);
}

TEST(ParameterShift, zero_angles_have_zero_beta_derivative) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const QaoaCircuit c(generate_erdos_renyi(6, 0.5, seed));
    for (int p = 1; p <= 3; ++p) {
      const QaoaParams zero = QaoaParams::zeros(p);
      const auto grad = c.parameter_shift_gradient(zero);
      const auto fd = fd_qaoa(c, zero);
      for (int k = 0; k < p; ++k) {
        EXPECT_NEAR(grad[p + k], 0.0, 1e-12);
        EXPECT_NEAR(fd[p + k], 0.0, 1e-9);
      }
    }
  }
}

TEST(ParameterShift, single_edge_matches_finite_differences) {
  const QaoaCircuit c(Graph(2, {{0, 1}}));
  const QaoaParams params({0.3}, {0.2});
  const auto grad = c.parameter_shift_gradient(params);
  const auto fd = fd_qaoa(c, params);
  EXPECT_LT(max_abs_diff(grad, fd), 1e-6);
  // Closed form for one edge at depth 1: <ZZ> = sin(4 beta) sin(2 gamma).
  EXPECT_NEAR(c.objective(params), std::sin(0.8) * std::sin(0.6), 1e-12);
  EXPECT_NEAR(grad[0], 2 * std::sin(0.8) * std::cos(0.6), 1e-12);
  EXPECT_NEAR(grad[1], 4 * std::cos(0.8) * std::sin(0.6), 1e-12);
}

TEST(ParameterShift, triangle_depth_two_matches_finite_differences) {
  const QaoaCircuit c(Graph(3, {{0, 1}, {0, 2}, {1, 2}}));
  Rng rng(2024);
  std::vector<double> x(4);
  for (double& v : x) v = kPi * uniform01(rng);
  const QaoaParams params = QaoaParams::from_vector(x);
  EXPECT_LT(max_abs_diff(c.parameter_shift_gradient(params), fd_qaoa(c, params)), 1e-6);
}

// Property: random graphs n <= 6, depth <= 3.
TEST(ParameterShift, agrees_with_finite_differences_on_random_instances) {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int p = 1 + static_cast<int>(rng() % 3);
    const QaoaCircuit c(generate_erdos_renyi(n, 0.6, rng()));
    std::vector<double> x(static_cast<std::size_t>(2 * p));
    for (double& v : x) v = 2 * kPi * uniform01(rng) - kPi;
    const QaoaParams params = QaoaParams::from_vector(x);
    EXPECT_LT(max_abs_diff(c.parameter_shift_gradient(params), fd_qaoa(c, params)), 1e-6)
        << "trial " << trial << " n=" << n << " p=" << p;
  }
}

TEST(Bfgs, rosenbrock) {
  Objective f(2, rosenbrock);
  Gradient g(rosenbrock_grad);
  const std::vector<double> x0{-1.2, 1.0};
  const OptimizeResult r = bfgs_minimize(f, g, x0, OptimizerConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 200);
  EXPECT_NEAR(r.best_params[0], 1.0, 1e-5);
  EXPECT_NEAR(r.best_params[1], 1.0, 1e-5);
}

TEST(Bfgs, convex_quadratic) {
  Objective f(2, sphere);
  Gradient g(sphere_grad);
  const std::vector<double> x0{3.0, 4.0};
  const OptimizeResult r = bfgs_minimize(f, g, x0, OptimizerConfig{});
  EXPECT_NEAR(r.best_value, 0.0, 1e-8);
}

TEST(Bfgs, monotone_trace_and_exact_counts) {
  Objective f(2, rosenbrock);
  Gradient g(rosenbrock_grad);
  const std::vector<double> x0{-1.2, 1.0};
  const OptimizeResult r = bfgs_minimize(f, g, x0, OptimizerConfig{});
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i].value, r.trace[i - 1].value);
  EXPECT_EQ(r.best_value, r.trace.back().value);
  EXPECT_EQ(r.n_evals, f.eval_count());
  EXPECT_EQ(r.n_grad_evals, g.eval_count());
  EXPECT_GE(r.wall_time_seconds, 0.0);
}

TEST(Bfgs, bad_gradient_flags_line_search_failure) {
  Objective f(1, sphere);
  Gradient wrong([](std::span<const double> x) { return std::vector<double>{-2 * x[0]}; });
  const std::vector<double> x0{1.0};
  const OptimizeResult r = bfgs_minimize(f, wrong, x0, OptimizerConfig{});
  EXPECT_TRUE(r.line_search_failed);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.best_params, x0);
  EXPECT_EQ(r.best_value, 1.0);
}

TEST(Bfgs, single_edge_qaoa_reaches_minus_one) {
  const QaoaCircuit c(Graph(2, {{0, 1}}));
  OptimizerConfig cfg;
  cfg.restarts = 8;
  cfg.init_seed = 5;
  const OptimizeResult r = minimize_qaoa(c, 1, cfg);
  EXPECT_NEAR(r.best_value, -1.0, 1e-5);
}

TEST(NelderMead, convex_quadratic) {
  Objective f(2, sphere);
  const std::vector<double> x0{3.0, 4.0};
  const OptimizeResult r = nelder_mead_minimize(f, x0, OptimizerConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.best_params[0], 0.0, 1e-3);
  EXPECT_NEAR(r.best_params[1], 0.0, 1e-3);
}

TEST(NelderMead, rosenbrock) {
  Objective f(2, rosenbrock);
  const std::vector<double> x0{-1.2, 1.0};
  const OptimizeResult r = nelder_mead_minimize(f, x0, OptimizerConfig{});
  EXPECT_NEAR(r.best_params[0], 1.0, 1e-3);
  EXPECT_NEAR(r.best_params[1], 1.0, 1e-3);
}

TEST(NelderMead, monotone_best_vertex_and_counts) {
  Objective f(2, rosenbrock);
  const std::vector<double> x0{-1.2, 1.0};
  const OptimizeResult r = nelder_mead_minimize(f, x0, OptimizerConfig{});
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i].value, r.trace[i - 1].value);
  EXPECT_EQ(r.n_evals, f.eval_count());
  EXPECT_EQ(r.n_grad_evals, 0U);
}

TEST(NelderMead, single_edge_qaoa_reaches_minus_one) {
  const QaoaCircuit c(Graph(2, {{0, 1}}));
  OptimizerConfig cfg;
  cfg.method = Method::nelder_mead;
  cfg.restarts = 8;
  cfg.init_seed = 5;
  const OptimizeResult r = minimize_qaoa(c, 1, cfg);
  EXPECT_NEAR(r.best_value, -1.0, 1e-3);
}

TEST(NelderMead, max_iters_respected) {
  Objective f(2, rosenbrock);
  OptimizerConfig cfg;
  cfg.max_iters = 5;
  const std::vector<double> x0{-1.2, 1.0};
  const OptimizeResult r = nelder_mead_minimize(f, x0, cfg);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_FALSE(r.converged);
}

TEST(Optimizers, deterministic) {
  const QaoaCircuit c(generate_erdos_renyi(6, 0.5, 3));
  for (Method m : {Method::bfgs, Method::nelder_mead}) {
    OptimizerConfig cfg;
    cfg.method = m;
    cfg.init_seed = 11;
    const OptimizeResult a = minimize_qaoa(c, 2, cfg);
    const OptimizeResult b = minimize_qaoa(c, 2, cfg);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.best_value, b.best_value);
    EXPECT_EQ(a.n_evals, b.n_evals);
    EXPECT_EQ(a.n_grad_evals, b.n_grad_evals);
    ASSERT_EQ(a.trace.size(), b.trace.size());
  }
}

TEST(Optimizers, restart_trace_minimum_is_best_value) {
  const QaoaCircuit c(generate_erdos_renyi(5, 0.5, 8));
  for (Method m : {Method::bfgs, Method::nelder_mead}) {
    OptimizerConfig cfg;
    cfg.method = m;
    cfg.restarts = 3;
    const OptimizeResult r = minimize_qaoa(c, 1, cfg);
    double lowest = std::numeric_limits<double>::infinity();
    for (const TracePoint& t : r.trace) lowest = std::min(lowest, t.value);
    EXPECT_EQ(lowest, r.best_value);
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GT(r.trace[i].iteration, r.trace[i - 1].iteration);
  }
}

TEST(OptimizerConfig, validation) {
  OptimizerConfig cfg;
  cfg.grad_tol = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_THROW(parse_method("adam"), InvalidArgument);
  EXPECT_EQ(parse_method("nelder-mead"), Method::nelder_mead);
}

TEST(RandomInit, seeded_and_in_range) {
  EXPECT_EQ(random_init(3, 9), random_init(3, 9));
  EXPECT_NE(random_init(3, 9), random_init(3, 10));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (double v : random_init(3, seed).to_vector()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, kPi);
    }
  }
  EXPECT_THROW(random_init(0, 1), InvalidArgument);
}

TEST(RandomInit, uniform_moments) {
  constexpr int kDraws = 10000;
  std::vector<double> sum(4, 0.0);
  for (int d = 0; d < kDraws; ++d) {
    const auto x = random_init(2, static_cast<std::uint64_t>(d)).to_vector();
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
  }
  const double se = (kPi / std::sqrt(12.0)) / std::sqrt(static_cast<double>(kDraws));
  for (double s : sum) EXPECT_NEAR(s / kDraws, kPi / 2, 3 * se);
}

TEST(OptimizeResult, json_layout) {
  Objective f(2, sphere);
  Gradient g(sphere_grad);
  const std::vector<double> x0{3.0, 4.0};
  const OptimizeResult r = bfgs_minimize(f, g, x0, OptimizerConfig{});
  const auto j = optimize_result_to_json(r);
  EXPECT_EQ(j["best_params"].size(), 2U);
  EXPECT_EQ(j["trace"].size(), r.trace.size());
  EXPECT_EQ(j["trace"][0][0], r.trace[0].iteration);
  EXPECT_EQ(j["n_evals"], r.n_evals);
  EXPECT_EQ(j["n_grad_evals"], r.n_grad_evals);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_GE(j["wall_time_seconds"].get<double>(), 0.0);
}
