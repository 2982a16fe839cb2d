// Copyright 2026 The mkc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "mkc/simple_mkkm.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mkc {

struct AltTraceEntry {
  int iter = 0;
  double objective = 0.0;
  Vector gamma;
};

/// Per-round record of an alternating solver.
struct AltTrace {
  std::vector<AltTraceEntry> iterations;
  bool converged = false;
  bool degenerate = false;  ///< a closed-form gamma step hit a zero coefficient or zero vector
};

/// Closed-form argmin of sum_p gamma_p^2 c_p over the simplex: gamma_p proportional to 1/c_p.
/// Coefficients <= 1e-12 take all the weight (split evenly among them) and set `degenerate`.
[[nodiscard]] Vector inverse_weight_update(const Vector& coeffs, bool* degenerate = nullptr);

/// Argmax of gamma^T b over the nonnegative unit ball: b+ / ||b+||. A zero vector
/// falls back to 1/sqrt(m) and sets `degenerate`.
[[nodiscard]] Vector ball_weight_update(const Vector& b, bool* degenerate = nullptr);

/// Kernel k-means on the uniform average (1/m) sum_p K_p.
[[nodiscard]] SolveResult avg_kkm(const KernelSet& ks, int k, std::uint64_t rng_seed, int rounding_restarts = 10);

/// MKKM: alternates H <- top-k eigvecs of K_gamma and gamma_p ∝ 1/Tr(K_p (I - H H^T)).
[[nodiscard]] std::pair<SolveResult, AltTrace> mkkm(const KernelSet& ks, int k, const SolverOptions& opts,
                                                    std::uint64_t rng_seed);

/// MKKM-MM: min over H, max over gamma in the nonnegative unit ball, with linear combination.
[[nodiscard]] std::pair<SolveResult, AltTrace> mkkm_mm(const KernelSet& ks, int k, const SolverOptions& opts,
                                                       std::uint64_t rng_seed);

/// KAMM-A: the min-max alignment objective solved by alternation instead of gradient descent.
[[nodiscard]] std::pair<SolveResult, AltTrace> kamm_a(const KernelSet& ks, int k, const SolverOptions& opts,
                                                      std::uint64_t rng_seed);

}  // namespace mkc
