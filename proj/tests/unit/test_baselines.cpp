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
#include "mkc/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace mkc {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    out[i++] = x;
  }
  return out;
}

// Block-diagonal kernel: ones within each block of `size`, plus a small ridge.
Matrix block_kernel(int blocks, int size, double ridge) {
  const int n = blocks * size;
  Matrix k = Matrix::Zero(n, n);
  for (int b = 0; b < blocks; ++b) {
    k.block(b * size, b * size, size, size).setOnes();
  }
  k.diagonal().array() += ridge;
  return k;
}

std::vector<int> block_labels(int blocks, int size) {
  std::vector<int> y;
  for (int b = 0; b < blocks; ++b) {
    y.insert(y.end(), static_cast<std::size_t>(size), b);
  }
  return y;
}

TEST(InverseWeightUpdate, ClosedFormExamples) {
  Vector g = inverse_weight_update(vec({1.0, 1.0}));
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  g = inverse_weight_update(vec({1.0, 3.0}));
  EXPECT_DOUBLE_EQ(g[0], 0.75);
  EXPECT_DOUBLE_EQ(g[1], 0.25);
  g = inverse_weight_update(vec({2.0, 2.0}));
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  g = inverse_weight_update(vec({1.0, 4.0}));
  EXPECT_DOUBLE_EQ(g[0], 0.8);
  EXPECT_DOUBLE_EQ(g[1], 0.2);
  g = inverse_weight_update(vec({5.0}));
  EXPECT_DOUBLE_EQ(g[0], 1.0);
}

TEST(InverseWeightUpdate, MatchesSimplexQpOracle) {
  for (const Vector& c : {vec({1.0, 3.0}), vec({1.0, 4.0}), vec({0.5, 2.0, 7.0}), vec({3.0, 3.0, 1.0, 9.0})}) {
    const Vector closed = inverse_weight_update(c);
    const Vector numeric = testing::simplex_qp_oracle(c);
    EXPECT_LE((closed - numeric).cwiseAbs().maxCoeff(), 1e-6) << c.transpose();
  }
}

TEST(InverseWeightUpdate, BeatsRandomSimplexPoints) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index m = 2 + trial;
    Vector a(m);
    for (Eigen::Index p = 0; p < m; ++p) {
      a[p] = coef(rng);
    }
    const Vector g = inverse_weight_update(a);
    const double best = g.cwiseAbs2().dot(a);
    for (int s = 0; s < 10000; ++s) {
      const Vector x = testing::random_simplex_point(m, rng);
      ASSERT_LE(best, x.cwiseAbs2().dot(a) + 1e-12);
    }
  }
}

TEST(InverseWeightUpdate, DegenerateCoefficientTakesVertex) {
  bool degenerate = false;
  const Vector g = inverse_weight_update(vec({0.0, 2.0, 3.0}), &degenerate);
  EXPECT_TRUE(degenerate);
  EXPECT_EQ(g[0], 1.0);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_EQ(g[2], 0.0);
  degenerate = false;
  (void)inverse_weight_update(vec({1.0, 2.0}), &degenerate);
  EXPECT_FALSE(degenerate);
}

TEST(BallWeightUpdate, ClosedFormExamples) {
  Vector g = ball_weight_update(vec({3.0, 4.0}));
  EXPECT_DOUBLE_EQ(g[0], 0.6);
  EXPECT_DOUBLE_EQ(g[1], 0.8);
  g = ball_weight_update(vec({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
  g = ball_weight_update(vec({2.0, -1.0}));
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(BallWeightUpdate, ZeroVectorFallsBackToUniform) {
  bool degenerate = false;
  const Vector g = ball_weight_update(Vector::Zero(4), &degenerate);
  EXPECT_TRUE(degenerate);
  for (Eigen::Index p = 0; p < 4; ++p) {
    EXPECT_DOUBLE_EQ(g[p], 0.5);
  }
}

TEST(BallWeightUpdate, BeatsRandomBallPoints) {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index m = 2 + trial;
    Vector b(m);
    for (Eigen::Index p = 0; p < m; ++p) {
      b[p] = std::abs(normal(rng)) + 0.01;
    }
    const double best = ball_weight_update(b).dot(b);
    for (int s = 0; s < 10000; ++s) {
      Vector x(m);
      for (Eigen::Index p = 0; p < m; ++p) {
        x[p] = std::abs(normal(rng));
      }
      x *= std::pow(unit(rng), 1.0 / static_cast<double>(m)) / x.norm();
      ASSERT_GE(best, x.dot(b) - 1e-12);
    }
  }
}

TEST(AvgKkm, SingleKernelIsKernelKmeans) {
  std::mt19937_64 rng(53);
  const Matrix k = testing::random_psd(20, 4, rng);
  const KernelSet ks({KernelMatrix(k)});
  const auto res = avg_kkm(ks, 3, 9);
  const auto direct = solve_relaxed_kkm(k, 3);
  EXPECT_DOUBLE_EQ(res.gamma[0], 1.0);
  EXPECT_DOUBLE_EQ(res.objective, direct.objective);
  EXPECT_EQ(res.labels.labels, discretize(direct.partition, 10, 9).labels);
}

TEST(AvgKkm, DuplicateKernelsMatchSingle) {
  std::mt19937_64 rng(54);
  const Matrix k = testing::random_psd(20, 4, rng);
  const auto one = avg_kkm(KernelSet({KernelMatrix(k)}), 3, 4);
  const auto two = avg_kkm(KernelSet({KernelMatrix(k), KernelMatrix(k)}), 3, 4);
  EXPECT_NEAR(one.objective, two.objective, 1e-12 * one.objective);
  EXPECT_EQ(one.labels.labels, two.labels.labels);
}

TEST(AvgKkm, SeparableBlocksGivePerfectAccuracy) {
  std::mt19937_64 rng(55);
  const KernelSet ks({KernelMatrix(block_kernel(2, 15, 0.1)), KernelMatrix(block_kernel(2, 15, 0.5))});
  const auto res = avg_kkm(ks, 2, 1);
  EXPECT_DOUBLE_EQ(clustering_accuracy(res.labels.labels, block_labels(2, 15)), 1.0);
}

TEST(Mkkm, SingleKernel) {
  std::mt19937_64 rng(56);
  const KernelSet ks({KernelMatrix(testing::random_psd(15, 5, rng))});
  const auto [res, alt] = mkkm(ks, 2, SolverOptions{}, 1);
  EXPECT_DOUBLE_EQ(res.gamma[0], 1.0);
  EXPECT_TRUE(alt.converged);
  EXPECT_FALSE(alt.degenerate);
}

TEST(Mkkm, ObjectiveNonIncreasing) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ks = testing::random_kernel_set(25, 4, rng);
    const auto [res, alt] = mkkm(ks, 3, SolverOptions{}, 1);
    ASSERT_FALSE(alt.iterations.empty());
    for (std::size_t t = 1; t < alt.iterations.size(); ++t) {
      EXPECT_LE(alt.iterations[t].objective, alt.iterations[t - 1].objective + 1e-9);
    }
    EXPECT_NEAR(res.gamma.sum(), 1.0, 1e-12);
    EXPECT_GE(res.gamma.minCoeff(), 0.0);
    EXPECT_EQ(res.domain, WeightDomain::simplex);
  }
}

TEST(MkkmMm, IdenticalKernelsGiveUniformBallWeights) {
  std::mt19937_64 rng(58);
  const Matrix k = testing::random_psd(15, 6, rng);
  const KernelSet ks({KernelMatrix(k), KernelMatrix(k), KernelMatrix(k), KernelMatrix(k)});
  const auto [res, alt] = mkkm_mm(ks, 3, SolverOptions{}, 1);
  EXPECT_TRUE(alt.converged);
  EXPECT_EQ(res.domain, WeightDomain::ball);
  for (Eigen::Index p = 0; p < 4; ++p) {
    EXPECT_NEAR(res.gamma[p], 0.5, 1e-12);
  }
}

TEST(MkkmMm, WeightsStayOnNonnegativeUnitSphere) {
  std::mt19937_64 rng(59);
  const auto ks = testing::random_kernel_set(20, 3, rng);
  const auto [res, alt] = mkkm_mm(ks, 2, SolverOptions{}, 1);
  for (const auto& e : alt.iterations) {
    EXPECT_NEAR(e.gamma.norm(), 1.0, 1e-12);
    EXPECT_GE(e.gamma.minCoeff(), 0.0);
  }
}

TEST(KammA, SingleKernel) {
  std::mt19937_64 rng(60);
  const KernelSet ks({KernelMatrix(testing::random_psd(15, 5, rng))});
  const auto [res, alt] = kamm_a(ks, 2, SolverOptions{}, 1);
  EXPECT_DOUBLE_EQ(res.gamma[0], 1.0);
}

TEST(KammA, IdenticalKernelsStayUniform) {
  std::mt19937_64 rng(61);
  const Matrix k = testing::random_psd(15, 6, rng);
  const KernelSet ks({KernelMatrix(k), KernelMatrix(k)});
  const auto [res, alt] = kamm_a(ks, 3, SolverOptions{}, 1);
  EXPECT_NEAR(res.gamma[0], 0.5, 1e-12);
  EXPECT_NEAR(res.gamma[1], 0.5, 1e-12);
}

TEST(Baselines, ShareSolveResultSchema) {
  std::mt19937_64 rng(62);
  const auto ks = testing::random_kernel_set(20, 3, rng);
  const SolverOptions opts;
  const std::vector<SolveResult> results{avg_kkm(ks, 2, 1), mkkm(ks, 2, opts, 1).first, mkkm_mm(ks, 2, opts, 1).first,
                                         kamm_a(ks, 2, opts, 1).first};
  for (const auto& r : results) {
    EXPECT_EQ(r.gamma.size(), 3);
    EXPECT_EQ(r.labels.size(), 20u);
    EXPECT_EQ(r.labels.k, 2);
    EXPECT_GE(r.iterations(), 1);
    EXPECT_EQ(r.partition.h().rows(), 20);
  }
}

TEST(Baselines, RejectBadK) {
  std::mt19937_64 rng(63);
  const auto ks = testing::random_kernel_set(5, 2, rng);
  EXPECT_THROW((void)avg_kkm(ks, 5, 1), InputError);
  EXPECT_THROW((void)mkkm(ks, 0, SolverOptions{}, 1), InputError);
  EXPECT_THROW((void)mkkm_mm(ks, 7, SolverOptions{}, 1), InputError);
  EXPECT_THROW((void)kamm_a(ks, -1, SolverOptions{}, 1), InputError);
}

}  // namespace
}  // namespace mkc
