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

#include "mkc/simple_mkkm.hpp"

#include "mkc/error.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace mkc {

void SolverOptions::validate() const {
  if (!(tol > 0.0)) {
    throw InputError("solver option tol must be > 0");
  }
  if (max_iter < 1) {
    throw InputError("solver option max_iter must be >= 1");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw InputError("solver option armijo_c must lie in (0, 1)");
  }
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw InputError("solver option armijo_shrink must lie in (0, 1)");
  }
  if (max_backtracks < 0) {
    throw InputError("solver option max_backtracks must be >= 0");
  }
  if (rounding_restarts < 1) {
    throw InputError("solver option rounding_restarts must be >= 1");
  }
}

SimplexWeights SolveResult::simplex_weights() const {
  if (domain != WeightDomain::simplex) {
    throw InputError("result weights live in the unit ball, not on the simplex");
  }
  return SimplexWeights(gamma);
}

namespace {

std::span<const double> as_span(const SimplexWeights& w) { return {w.values().data(), w.size()}; }

void require_weights(const KernelSet& ks, const SimplexWeights& w) {
  if (w.size() != ks.m()) {
    throw InputError("weight vector has length " + std::to_string(w.size()) + " but kernel set has m = " +
                     std::to_string(ks.m()));
  }
}

// Sum of the k largest eigenvalues without forming eigenvectors.
double top_k_eigensum(const Matrix& k_mat, int k) {
  if (k < 1 || k >= k_mat.rows()) {
    throw InputError("need 1 <= k < n (k = " + std::to_string(k) + ", n = " + std::to_string(k_mat.rows()) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k_mat, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigendecomposition did not converge");
  }
  const double value = eig.eigenvalues().tail(k).sum();
  if (!std::isfinite(value)) {
    throw NumericError("objective is not finite");
  }
  return value;
}

}  // namespace

double objective_value(const KernelSet& ks, const SimplexWeights& w, int k) {
  require_weights(ks, w);
  return top_k_eigensum(combine_squared(ks, as_span(w)), k);
}

GradientEval objective_and_grad(const KernelSet& ks, const SimplexWeights& w, int k) {
  require_weights(ks, w);
  EigenSolution sol = solve_relaxed_kkm(combine_squared(ks, as_span(w)), k);
  if (!std::isfinite(sol.objective)) {
    throw NumericError("objective is not finite");
  }
  const Matrix& h = sol.partition.h();
  Vector grad(static_cast<Eigen::Index>(ks.m()));
  for (std::size_t p = 0; p < ks.m(); ++p) {
    const auto i = static_cast<Eigen::Index>(p);
    grad[i] = w[p] == 0.0 ? 0.0 : 2.0 * w[p] * alignment(ks[p].values(), h);
  }
  const double objective = sol.objective;
  const double gap = sol.eigen_gap;
  return GradientEval{objective, std::move(grad), gap, std::move(sol)};
}

ReducedGradient reduced_gradient(const Vector& grad, const SimplexWeights& w) {
  if (static_cast<std::size_t>(grad.size()) != w.size()) {
    throw InputError("reduced_gradient: gradient and weights differ in length");
  }
  if (!grad.allFinite()) {
    throw NumericError("reduced_gradient: gradient is not finite");
  }
  int u = 0;
  for (Eigen::Index p = 1; p < grad.size(); ++p) {
    if (w.values()[p] > w.values()[u]) {
      u = static_cast<int>(p);
    }
  }
  Vector rg(grad.size());
  double acc = 0.0;
  for (Eigen::Index p = 0; p < grad.size(); ++p) {
    if (p == u) {
      continue;
    }
    rg[p] = grad[p] - grad[u];
    acc += grad[u] - grad[p];
  }
  rg[u] = acc;
  return ReducedGradient{std::move(rg), u};
}

Vector descent_direction(const Vector& rg, const SimplexWeights& w, int u) {
  if (static_cast<std::size_t>(rg.size()) != w.size() || u < 0 || u >= rg.size()) {
    throw InputError("descent_direction: inconsistent reduced gradient, weights or pivot index");
  }
  Vector d = Vector::Zero(rg.size());
  double balance = 0.0;
  for (Eigen::Index p = 0; p < rg.size(); ++p) {
    if (p == u) {
      continue;
    }
    if (w.values()[p] == 0.0 && rg[p] > 0.0) {
      continue;
    }
    d[p] = -rg[p];
    balance += rg[p];
  }
  d[u] = balance;
  return d;
}

double max_feasible_step(const SimplexWeights& w, const Vector& d) {
  double cap = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < d.size(); ++p) {
    if (d[p] < 0.0) {
      cap = std::min(cap, w.values()[p] / -d[p]);
    }
  }
  return cap;
}

SimplexWeights step_on_simplex(const SimplexWeights& w, const Vector& d, double alpha) {
  Vector next = w.values() + alpha * d;
  const double cap = max_feasible_step(w, d);
  if (alpha >= cap) {
    for (Eigen::Index p = 0; p < d.size(); ++p) {
      if (d[p] < 0.0 && w.values()[p] / -d[p] <= alpha) {
        next[p] = 0.0;
      }
    }
  }
  return SimplexWeights::renormalized(std::move(next));
}

namespace {

struct LineSearchOutcome {
  LineSearchResult result;
  SimplexWeights accepted;
};

LineSearchOutcome armijo(const KernelSet& ks, const SimplexWeights& w, const Vector& d, double j0,
                         const Vector& grad, int k, const SolverOptions& opts, Sense sense) {
  const double sign = sense == Sense::minimize ? 1.0 : -1.0;
  LineSearchOutcome out{LineSearchResult{0.0, j0, 0, max_feasible_step(w, d)}, w};
  const double d_inf = d.cwiseAbs().maxCoeff();
  if (d.size() == 0 || d_inf == 0.0) {
    return out;
  }
  const double slope = sign * grad.dot(d);
  if (!(slope < 0.0)) {
    return out;
  }
  double alpha = std::min(out.result.alpha_max, 1.0 / d_inf);
  for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
    SimplexWeights trial = step_on_simplex(w, d, alpha);
    const double j = objective_value(ks, trial, k);
    if (!std::isfinite(j)) {
      throw NumericError("line search produced a non-finite objective");
    }
    if (sign * j <= sign * j0 + opts.armijo_c * alpha * slope) {
      out.result.alpha = alpha;
      out.result.objective = j;
      out.result.backtracks = bt;
      out.accepted = std::move(trial);
      return out;
    }
    alpha *= opts.armijo_shrink;
  }
  out.result.backtracks = opts.max_backtracks;
  return out;
}

SolveResult run_reduced_gradient(const KernelSet& ks, int k, const SolverOptions& opts, std::uint64_t rng_seed,
                                 Sense sense) {
  opts.validate();
  if (k < 1 || k >= ks.n()) {
    throw InputError("need 1 <= k < n (k = " + std::to_string(k) + ", n = " + std::to_string(ks.n()) + ")");
  }
  SimplexWeights w = SimplexWeights::uniform(ks.m());
  SimplexWeights prev = w;
  GradientEval eval = objective_and_grad(ks, w, k);
  SolverTrace trace;
  double alpha_in = 0.0;
  bool converged = false;

  for (int t = 1;; ++t) {
    const Vector signed_grad = sense == Sense::minimize ? eval.grad : Vector(-eval.grad);
    ReducedGradient rg = reduced_gradient(signed_grad, w);
    trace.iterations.push_back(
        TraceEntry{t, eval.objective, w.values(), alpha_in, eval.eigen_gap, rg.rg.cwiseAbs().maxCoeff()});

    // Algorithm 1 compares gamma^(t) with gamma^(t-1); there is no gamma^(0).
    if (t > 1 && (w.values() - prev.values()).cwiseAbs().maxCoeff() <= opts.tol) {
      converged = true;
      break;
    }
    if (t == opts.max_iter) {
      break;
    }
    const Vector d = descent_direction(rg.rg, w, rg.u);
    if (d.cwiseAbs().maxCoeff() == 0.0) {
      converged = true;
      break;
    }
    auto ls = armijo(ks, w, d, eval.objective, eval.grad, k, opts, sense);
    if (ls.result.alpha == 0.0) {
      // No acceptable step at this scale: treat as stationary.
      converged = true;
      break;
    }
    prev = std::move(w);
    w = std::move(ls.accepted);
    alpha_in = ls.result.alpha;
    eval = objective_and_grad(ks, w, k);
  }

  ClusterLabels labels = discretize(eval.solution.partition, opts.rounding_restarts, rng_seed);
  return SolveResult{w.values(),  WeightDomain::simplex, std::move(eval.solution.partition), std::move(labels),
                     eval.objective, std::move(trace), converged};
}

}  // namespace

LineSearchResult line_search_armijo(const KernelSet& ks, const SimplexWeights& w, const Vector& d, double j0,
                                    const Vector& grad, int k, const SolverOptions& opts, Sense sense) {
  if (static_cast<std::size_t>(d.size()) != w.size() || grad.size() != d.size()) {
    throw InputError("line_search_armijo: direction, gradient and weights differ in length");
  }
  return armijo(ks, w, d, j0, grad, k, opts, sense).result;
}

SolveResult solve(const KernelSet& ks, int k, const SolverOptions& opts, std::uint64_t rng_seed) {
  return run_reduced_gradient(ks, k, opts, rng_seed, Sense::minimize);
}

SolveResult solve_kamm_r(const KernelSet& ks, int k, const SolverOptions& opts, std::uint64_t rng_seed) {
  return run_reduced_gradient(ks, k, opts, rng_seed, Sense::maximize);
}

}  // namespace mkc
