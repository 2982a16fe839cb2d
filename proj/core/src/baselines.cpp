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

#include "mkc/baselines.hpp"

#include "mkc/error.hpp"

#include <cmath>
#include <string>

namespace mkc {

namespace {

constexpr double kDegenerateCoefficient = 1e-12;

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void check_k(const KernelSet& ks, int k) {
  if (k < 1 || k >= ks.n()) {
    throw InputError("need 1 <= k < n (k = " + std::to_string(k) + ", n = " + std::to_string(ks.n()) + ")");
  }
}

// Tr(K_p H H^T) for every p.
Vector alignments(const KernelSet& ks, const Matrix& h) {
  Vector c(static_cast<Eigen::Index>(ks.m()));
  for (std::size_t p = 0; p < ks.m(); ++p) {
    c[static_cast<Eigen::Index>(p)] = alignment(ks[p].values(), h);
  }
  return c;
}

Vector traces(const KernelSet& ks) {
  Vector t(static_cast<Eigen::Index>(ks.m()));
  for (std::size_t p = 0; p < ks.m(); ++p) {
    t[static_cast<Eigen::Index>(p)] = ks[p].trace();
  }
  return t;
}

SolverTrace as_solver_trace(const AltTrace& alt) {
  SolverTrace trace;
  for (const auto& e : alt.iterations) {
    trace.iterations.push_back(TraceEntry{e.iter, e.objective, e.gamma, 0.0, 0.0, 0.0});
  }
  return trace;
}

// Which combination rule the H-step uses.
enum class Combination { squared, linear };

// Shared alternation loop. `gamma_step` maps (H) to new weights and returns the
// objective to record for the finished round.
template <typename GammaStep>
std::pair<SolveResult, AltTrace> alternate(const KernelSet& ks, int k, const SolverOptions& opts,
                                           std::uint64_t rng_seed, Vector gamma, Combination comb,
                                           WeightDomain domain, GammaStep&& gamma_step) {
  opts.validate();
  check_k(ks, k);
  AltTrace alt;
  std::vector<double> gaps;
  for (int t = 1; t <= opts.max_iter; ++t) {
    const Matrix kg = comb == Combination::squared ? combine_squared(ks, as_span(gamma))
                                                   : combine_linear(ks, as_span(gamma));
    EigenSolution sol = solve_relaxed_kkm(kg, k);
    auto [next, objective] = gamma_step(sol.partition.h(), alt.degenerate);
    const double change = (next - gamma).cwiseAbs().maxCoeff();
    gamma = std::move(next);
    alt.iterations.push_back(AltTraceEntry{t, objective, gamma});
    gaps.push_back(sol.eigen_gap);
    if (change <= opts.tol) {
      alt.converged = true;
      break;
    }
  }
  const Matrix kg = comb == Combination::squared ? combine_squared(ks, as_span(gamma))
                                                 : combine_linear(ks, as_span(gamma));
  EigenSolution final_sol = solve_relaxed_kkm(kg, k);
  ClusterLabels labels = discretize(final_sol.partition, opts.rounding_restarts, rng_seed);
  SolverTrace trace = as_solver_trace(alt);
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    trace.iterations[i].eigen_gap = gaps[i];
  }
  const double objective = alt.iterations.empty() ? 0.0 : alt.iterations.back().objective;
  SolveResult res{gamma,           domain,          std::move(final_sol.partition), std::move(labels),
                  objective,       std::move(trace), alt.converged};
  return {std::move(res), std::move(alt)};
}

}  // namespace

Vector inverse_weight_update(const Vector& coeffs, bool* degenerate) {
  if (coeffs.size() == 0 || !coeffs.allFinite()) {
    throw InputError("inverse_weight_update: coefficients must be non-empty and finite");
  }
  Vector gamma = Vector::Zero(coeffs.size());
  Eigen::Index n_zero = 0;
  for (Eigen::Index p = 0; p < coeffs.size(); ++p) {
    if (coeffs[p] <= kDegenerateCoefficient) {
      ++n_zero;
    }
  }
  if (n_zero > 0) {
    // The infimum puts all mass on the free coordinates.
    for (Eigen::Index p = 0; p < coeffs.size(); ++p) {
      gamma[p] = coeffs[p] <= kDegenerateCoefficient ? 1.0 / static_cast<double>(n_zero) : 0.0;
    }
    if (degenerate != nullptr) {
      *degenerate = true;
    }
    return gamma;
  }
  gamma = coeffs.cwiseInverse();
  gamma /= gamma.sum();
  return gamma;
}

Vector ball_weight_update(const Vector& b, bool* degenerate) {
  if (b.size() == 0 || !b.allFinite()) {
    throw InputError("ball_weight_update: coefficients must be non-empty and finite");
  }
  Vector clipped = b.cwiseMax(0.0);
  const double norm = clipped.norm();
  if (!(norm > 0.0)) {
    if (degenerate != nullptr) {
      *degenerate = true;
    }
    return Vector::Constant(b.size(), 1.0 / std::sqrt(static_cast<double>(b.size())));
  }
  return clipped / norm;
}

SolveResult avg_kkm(const KernelSet& ks, int k, std::uint64_t rng_seed, int rounding_restarts) {
  check_k(ks, k);
  const auto m = static_cast<Eigen::Index>(ks.m());
  const Vector gamma = Vector::Constant(m, 1.0 / static_cast<double>(m));
  EigenSolution sol = solve_relaxed_kkm(combine_linear(ks, as_span(gamma)), k);
  ClusterLabels labels = discretize(sol.partition, rounding_restarts, rng_seed);
  SolverTrace trace;
  trace.iterations.push_back(TraceEntry{1, sol.objective, gamma, 0.0, sol.eigen_gap, 0.0});
  return SolveResult{gamma, WeightDomain::simplex, std::move(sol.partition), std::move(labels), sol.objective,
                     std::move(trace), true};
}

std::pair<SolveResult, AltTrace> mkkm(const KernelSet& ks, int k, const SolverOptions& opts, std::uint64_t rng_seed) {
  const Vector tr = traces(ks);
  return alternate(ks, k, opts, rng_seed, SimplexWeights::uniform(ks.m()).values(), Combination::squared,
                   WeightDomain::simplex, [&](const Matrix& h, bool& degenerate) {
                     const Vector a = tr - alignments(ks, h);
                     Vector gamma = inverse_weight_update(a, &degenerate);
                     const double objective = gamma.cwiseAbs2().dot(a);
                     return std::pair{std::move(gamma), objective};
                   });
}

std::pair<SolveResult, AltTrace> mkkm_mm(const KernelSet& ks, int k, const SolverOptions& opts,
                                         std::uint64_t rng_seed) {
  const Vector tr = traces(ks);
  return alternate(ks, k, opts, rng_seed, BallWeights::uniform(ks.m()).values(), Combination::linear,
                   WeightDomain::ball, [&](const Matrix& h, bool& degenerate) {
                     const Vector b = tr - alignments(ks, h);
                     Vector gamma = ball_weight_update(b, &degenerate);
                     const double objective = gamma.dot(b);
                     return std::pair{std::move(gamma), objective};
                   });
}

std::pair<SolveResult, AltTrace> kamm_a(const KernelSet& ks, int k, const SolverOptions& opts,
                                        std::uint64_t rng_seed) {
  return alternate(ks, k, opts, rng_seed, SimplexWeights::uniform(ks.m()).values(), Combination::squared,
                   WeightDomain::simplex, [&](const Matrix& h, bool& degenerate) {
                     const Vector c = alignments(ks, h);
                     Vector gamma = inverse_weight_update(c, &degenerate);
                     const double objective = gamma.cwiseAbs2().dot(c);
                     return std::pair{std::move(gamma), objective};
                   });
}

}  // namespace mkc
