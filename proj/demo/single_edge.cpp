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

// Optimizes depth-1 QAOA on a single edge with both optimizers and prints the
// resulting angles and expected cut.

#include <cstdio>

#include "qaoa/qaoa.hpp"

int main() {
  const qaoa::Graph edge(2, {{0, 1}});
  const qaoa::QaoaCircuit circuit(edge);
  for (qaoa::Method method : {qaoa::Method::bfgs, qaoa::Method::nelder_mead}) {
    qaoa::OptimizerConfig cfg;
    cfg.method = method;
    cfg.restarts = 8;
    cfg.init_seed = 1;
    const qaoa::OptimizeResult r = qaoa::minimize_qaoa(circuit, 1, cfg);
    std::printf("%-12s gamma=%.6f beta=%.6f  <ZZ>=%.8f  expected cut=%.8f  evals=%llu grads=%llu\n",
                qaoa::method_name(method).c_str(), r.best_params[0], r.best_params[1], r.best_value,
                0.5 * (1.0 - r.best_value), static_cast<unsigned long long>(r.n_evals),
                static_cast<unsigned long long>(r.n_grad_evals));
  }
  return 0;
}
