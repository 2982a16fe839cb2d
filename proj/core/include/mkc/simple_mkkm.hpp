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

#include "mkc/kernel.hpp"
#include "mkc/spectral.hpp"

#include <cstdint>
#include <vector>

namespace mkc {

/// Options shared by the reduced-gradient solvers and the alternating baselines.
struct SolverOptions {
  double tol = 1e-4;          ///< stop when max_p |gamma_t - gamma_{t-1}| <= tol
  int max_iter = 100;         ///< outer-iteration cap
  double armijo_c = 1e-4;     ///< sufficient-decrease constant
  double armijo_shrink = 0.5; ///< backtracking factor
  int max_backtracks = 30;
  int rounding_restarts = 10; ///< k-means restarts when discretizing the final H

  /// Throws InputError when an option is out of range.
  void validate() const;
};

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;
  Vector gamma;
  double alpha = 0.0;      ///< step that produced this iterate (0 for the first)
  double eigen_gap = 0.0;
  double rg_norm = 0.0;    ///< ||reduced gradient||_inf at this iterate (0 for alternating solvers)
};

struct SolverTrace {
  std::vector<TraceEntry> iterations;
};

enum class WeightDomain { simplex, ball };

/// Common output of every clustering algorithm in the library.
struct SolveResult {
  Vector gamma;
  WeightDomain domain = WeightDomain::simplex;
  Partition partition;
  ClusterLabels labels;
  double objective = 0.0;  ///< algorithm's own objective at the returned point
  SolverTrace trace;
  bool converged = false;

  [[nodiscard]] int iterations() const { return static_cast<int>(trace.iterations.size()); }
  /// Throws InputError when the result does not live on the simplex.
  [[nodiscard]] SimplexWeights simplex_weights() const;
};

/// J(gamma) = max_H Tr(K_gamma H H^T) and its gradient dJ/dgamma_p = 2 gamma_p Tr(K_p H* H*^T).
struct GradientEval {
  double objective = 0.0;
  Vector grad;
  double eigen_gap = 0.0;
  EigenSolution solution;
};

[[nodiscard]] double objective_value(const KernelSet& ks, const SimplexWeights& w, int k);
[[nodiscard]] GradientEval objective_and_grad(const KernelSet& ks, const SimplexWeights& w, int k);

struct ReducedGradient {
  Vector rg;
  int u = 0;  ///< eliminated coordinate: argmax gamma, smallest index on ties
};

/// rg_p = g_p - g_u for p != u and rg_u = sum_{p != u} (g_u - g_p).
[[nodiscard]] ReducedGradient reduced_gradient(const Vector& grad, const SimplexWeights& w);

/// Feasible descent direction from a reduced gradient.
///
/// Coordinates at zero weight whose reduced gradient is positive are frozen
/// (d_p = 0); every other p != u moves along -rg_p, and d_u balances the rest so
/// that sum(d) == 0.
[[nodiscard]] Vector descent_direction(const Vector& rg, const SimplexWeights& w, int u);

enum class Sense { minimize, maximize };

struct LineSearchResult {
  double alpha = 0.0;
  double objective = 0.0;  ///< J at the accepted point, J0 when alpha == 0
  int backtracks = 0;
  double alpha_max = 0.0;  ///< feasibility cap; +inf when no coordinate decreases
};

/// Largest alpha keeping gamma + alpha * d nonnegative (+inf when d >= 0).
[[nodiscard]] double max_feasible_step(const SimplexWeights& w, const Vector& d);

/// gamma + alpha * d projected back onto the simplex. Coordinates that block
/// the feasibility cap are set to exactly zero when alpha reaches it.
[[nodiscard]] SimplexWeights step_on_simplex(const SimplexWeights& w, const Vector& d, double alpha);

/// Backtracking Armijo search starting at min(alpha_max, 1 / ||d||_inf).
/// Returns alpha = 0 with the input objective when no trial satisfies the
/// sufficient-change condition within opts.max_backtracks.
[[nodiscard]] LineSearchResult line_search_armijo(const KernelSet& ks, const SimplexWeights& w, const Vector& d,
                                                  double j0, const Vector& grad, int k, const SolverOptions& opts,
                                                  Sense sense = Sense::minimize);

/// Minimizes J over the simplex by reduced gradient descent from gamma = 1/m.
[[nodiscard]] SolveResult solve(const KernelSet& ks, int k, const SolverOptions& opts, std::uint64_t rng_seed);

/// Same machinery run as ascent (maximizes J over gamma as well as H).
[[nodiscard]] SolveResult solve_kamm_r(const KernelSet& ks, int k, const SolverOptions& opts,
                                       std::uint64_t rng_seed);

}  // namespace mkc
