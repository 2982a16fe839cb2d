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

#include "mkc/mkc.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace mkc;

KernelSet random_kernels(Eigen::Index n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<KernelMatrix> ks;
  for (std::size_t p = 0; p < m; ++p) {
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a.data()[i] = normal(rng);
    }
    ks.push_back(trace_normalize(KernelMatrix(Matrix(a * a.transpose()))));
  }
  return KernelSet(std::move(ks));
}

void BM_SolveRelaxedKkm(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix k = random_kernels(n, 1, 1)[0].values();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_relaxed_kkm(k, 5).objective);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveRelaxedKkm)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oNCubed);

void BM_ObjectiveAndGrad(benchmark::State& state) {
  const auto n = state.range(0);
  const auto ks = random_kernels(n, 5, 2);
  const auto w = SimplexWeights::uniform(ks.m());
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective_and_grad(ks, w, 5).objective);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ObjectiveAndGrad)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oNCubed);

void BM_SolverIteration(benchmark::State& state) {
  const auto n = state.range(0);
  const auto ks = random_kernels(n, 5, 3);
  SolverOptions opts;
  opts.max_iter = 2;
  opts.rounding_restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(ks, 5, opts, 0).objective);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolverIteration)->RangeMultiplier(2)->Range(50, 200)->Unit(benchmark::kMillisecond);

void BM_Discretize(benchmark::State& state) {
  const auto n = state.range(0);
  const auto sol = solve_relaxed_kkm(random_kernels(n, 1, 4)[0].values(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discretize(sol.partition, 10, 0).labels.data());
  }
}
BENCHMARK(BM_Discretize)->Arg(100)->Arg(400);

void BM_ClusteringAccuracy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> label(0, 9);
  std::vector<int> a(n);
  std::vector<int> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = label(rng);
    b[i] = label(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(clustering_accuracy(a, b));
  }
}
BENCHMARK(BM_ClusteringAccuracy)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
