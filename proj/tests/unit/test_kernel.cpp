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

#include "mkc/error.hpp"
#include "mkc/kernel.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace mkc {
namespace {

KernelSet two_identities() {
  return KernelSet({KernelMatrix(Matrix::Identity(2, 2), "a"), KernelMatrix(2.0 * Matrix::Identity(2, 2), "b")});
}

TEST(CombineSquared, SingleKernelIsUnchanged) {
  std::mt19937_64 rng(1);
  const Matrix k = testing::random_psd(5, 3, rng);
  const KernelSet ks({KernelMatrix(k)});
  EXPECT_EQ(combine_squared(ks, SimplexWeights::uniform(1)).values(), k);
}

TEST(CombineSquared, HalfWeightsOnScaledIdentities) {
  const auto out = combine_squared(two_identities(), SimplexWeights(Vector::Constant(2, 0.5)));
  EXPECT_TRUE(out.values().isApprox(0.75 * Matrix::Identity(2, 2), 1e-15));
}

TEST(CombineSquared, VertexSelectsKernelExactly) {
  std::mt19937_64 rng(2);
  const Matrix k1 = testing::random_psd(4, 4, rng);
  const KernelSet ks({KernelMatrix(k1), KernelMatrix(testing::random_psd(4, 2, rng))});
  Vector g(2);
  g << 1.0, 0.0;
  EXPECT_EQ(combine_squared(ks, SimplexWeights(g)).values(), k1);
}

TEST(CombineSquared, RejectsLengthMismatch) {
  EXPECT_THROW((void)combine_squared(two_identities(), SimplexWeights::uniform(3)), InputError);
}

TEST(CombineLinear, Examples) {
  const KernelSet ids({KernelMatrix(Matrix::Identity(3, 3)), KernelMatrix(Matrix::Identity(3, 3))});
  Vector g(2);
  g << 1.0, 0.0;
  EXPECT_EQ(combine_linear(ids, BallWeights(g)).values(), Matrix::Identity(3, 3));

  g << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(combine_linear(ids, BallWeights(g)).values().isApprox(std::sqrt(2.0) * Matrix::Identity(3, 3), 1e-15));

  const Vector zero = Vector::Zero(2);
  EXPECT_TRUE(combine_linear(ids, BallWeights(zero)).values().isZero(0.0));
  EXPECT_THROW((void)combine_linear(ids, BallWeights(Vector::Constant(3, 0.1))), InputError);
}

TEST(ValidateAndRepair, SymmetricPsdPassesBitIdentical) {
  std::mt19937_64 rng(3);
  const Matrix k = testing::random_psd(6, 6, rng);
  const auto res = validate_and_repair(k, "k", true);
  EXPECT_EQ(res.kernel.values(), k);
  EXPECT_FALSE(res.report.symmetrized);
  EXPECT_FALSE(res.report.psd_repaired);
  EXPECT_TRUE(res.report.psd);
}

TEST(ValidateAndRepair, SymmetrizesOffDiagonal) {
  Matrix k(2, 2);
  k << 1.0, 0.1, 0.3, 1.0;
  const auto res = validate_and_repair(k, "k", false);
  EXPECT_TRUE(res.report.symmetrized);
  EXPECT_NEAR(res.report.max_asymmetry, 0.2, 1e-15);
  EXPECT_NEAR(res.kernel.values()(0, 1), 0.2, 1e-15);
  EXPECT_NEAR(res.kernel.values()(1, 0), 0.2, 1e-15);
}

TEST(ValidateAndRepair, ClipsNegativeEigenvalue) {
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = -0.5;
  const auto res = validate_and_repair(k, "k", true);
  EXPECT_TRUE(res.report.psd_repaired);
  EXPECT_EQ(res.report.clipped_eigenvalues, 1u);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LE((res.kernel.values() - expected).cwiseAbs().maxCoeff(), 1e-15);

  const auto untouched = validate_and_repair(k, "k", false);
  EXPECT_FALSE(untouched.report.psd);
  EXPECT_FALSE(untouched.report.psd_repaired);
  EXPECT_EQ(untouched.kernel.values(), k);
}

TEST(ValidateAndRepair, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW((void)validate_and_repair(Matrix::Zero(2, 3), "k", false), InputError);
  Matrix k = Matrix::Identity(3, 3);
  k(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW((void)validate_and_repair(k, "k", false), InputError);
  k(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW((void)validate_and_repair(k, "k", false), InputError);
}

TEST(TraceNormalize, Examples) {
  EXPECT_EQ(trace_normalize(KernelMatrix(Matrix::Identity(5, 5))).values(), Matrix::Identity(5, 5));
  EXPECT_TRUE(trace_normalize(KernelMatrix(2.0 * Matrix::Identity(4, 4))).values().isApprox(Matrix::Identity(4, 4)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Matrix out = trace_normalize(KernelMatrix(d)).values();
  EXPECT_DOUBLE_EQ(out(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(out(1, 1), 0.5);
  EXPECT_THROW((void)trace_normalize(KernelMatrix(Matrix::Zero(3, 3))), InputError);
  EXPECT_THROW((void)trace_normalize(KernelMatrix(-Matrix::Identity(3, 3))), InputError);
}

TEST(KernelSet, Invariants) {
  EXPECT_THROW(KernelSet({}), InputError);
  EXPECT_THROW(KernelSet({KernelMatrix(Matrix::Identity(3, 3)), KernelMatrix(Matrix::Identity(4, 4))}),
               DimensionMismatchError);
  EXPECT_THROW(KernelMatrix(Matrix::Zero(2, 3)), InputError);
}

TEST(Weights, Invariants) {
  EXPECT_THROW(SimplexWeights(Vector::Constant(2, 0.4)), InputError);
  Vector neg(2);
  neg << 1.5, -0.5;
  EXPECT_THROW(SimplexWeights{neg}, InputError);
  EXPECT_THROW(BallWeights(Vector::Constant(2, 0.8)), InputError);
  EXPECT_THROW(BallWeights{neg}, InputError);
  EXPECT_NEAR(BallWeights::uniform(4).values().norm(), 1.0, 1e-15);
  const auto r = SimplexWeights::renormalized(neg);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 0.0);
}

TEST(CombineProperties, SquaredEqualsLinearOnSquaredWeights) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ks = testing::random_kernel_set(12, 4, rng);
    const Vector g = testing::random_simplex_point(4, rng);
    const Vector g2 = g.cwiseAbs2();
    const Matrix a = combine_squared(ks, std::span<const double>(g.data(), 4));
    const Matrix b = combine_linear(ks, std::span<const double>(g2.data(), 4));
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12 * a.cwiseAbs().maxCoeff());
  }
}

TEST(CombineProperties, NonnegativeCombinationIsPsd) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ks = testing::random_kernel_set(15, 3, rng);
    const Vector g = testing::random_simplex_point(3, rng);
    for (const Matrix& c : {combine_squared(ks, std::span<const double>(g.data(), 3)),
                            combine_linear(ks, std::span<const double>(g.data(), 3))}) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(c, Eigen::EigenvaluesOnly);
      const double spectral = eig.eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_GE(eig.eigenvalues().minCoeff(), -kPsdRelativeTolerance * spectral);
    }
  }
}

TEST(CombineProperties, SquaredIsTwoHomogeneous) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ks = testing::random_kernel_set(10, 3, rng);
    const Vector g = testing::random_simplex_point(3, rng);
    const double c = scale(rng);
    const Vector cg = c * g;
    const Matrix lhs = combine_squared(ks, std::span<const double>(cg.data(), 3));
    const Matrix rhs = c * c * combine_squared(ks, std::span<const double>(g.data(), 3));
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * rhs.cwiseAbs().maxCoeff());
  }
}

}  // namespace
}  // namespace mkc
