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

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mkc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPsdRelativeTolerance = 1e-8;
inline constexpr double kSimplexTolerance = 1e-12;

/// A dense symmetric n x n Gram matrix with an identifier.
///
/// Construction rejects non-square or non-finite input and symmetrizes the
/// values as (K + K^T) / 2, which is a bit-exact no-op on symmetric input.
/// Instances are immutable.
class KernelMatrix {
 public:
  KernelMatrix(Matrix values, std::string name = {});

  [[nodiscard]] Eigen::Index n() const { return values_.rows(); }
  [[nodiscard]] const Matrix& values() const { return values_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double trace() const { return values_.trace(); }

 private:
  Matrix values_;
  std::string name_;
};

/// Ordered collection of m >= 1 kernels over the same n samples.
class KernelSet {
 public:
  explicit KernelSet(std::vector<KernelMatrix> kernels);

  [[nodiscard]] std::size_t m() const { return kernels_.size(); }
  [[nodiscard]] Eigen::Index n() const { return n_; }
  [[nodiscard]] const KernelMatrix& operator[](std::size_t p) const { return kernels_[p]; }
  [[nodiscard]] const std::vector<KernelMatrix>& kernels() const { return kernels_; }
  [[nodiscard]] auto begin() const { return kernels_.begin(); }
  [[nodiscard]] auto end() const { return kernels_.end(); }

 private:
  std::vector<KernelMatrix> kernels_;
  Eigen::Index n_ = 0;
};

/// Kernel weights on the probability simplex: gamma >= 0, sum(gamma) = 1.
class SimplexWeights {
 public:
  explicit SimplexWeights(Vector gamma);

  static SimplexWeights uniform(std::size_t m);
  /// Clamps negatives to zero and rescales to unit sum. Throws if nothing positive remains.
  static SimplexWeights renormalized(Vector gamma);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(gamma_.size()); }
  [[nodiscard]] const Vector& values() const { return gamma_; }
  [[nodiscard]] double operator[](std::size_t p) const { return gamma_[static_cast<Eigen::Index>(p)]; }

 private:
  Vector gamma_;
};

/// Nonnegative kernel weights inside the unit Euclidean ball.
class BallWeights {
 public:
  explicit BallWeights(Vector gamma);

  static BallWeights uniform(std::size_t m);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(gamma_.size()); }
  [[nodiscard]] const Vector& values() const { return gamma_; }
  [[nodiscard]] double operator[](std::size_t p) const { return gamma_[static_cast<Eigen::Index>(p)]; }

 private:
  Vector gamma_;
};

// Combination rules. The span overloads accept raw coefficient vectors with no
// simplex or ball constraint.

/// sum_p gamma_p^2 K_p
[[nodiscard]] KernelMatrix combine_squared(const KernelSet& ks, const SimplexWeights& w);
[[nodiscard]] Matrix combine_squared(const KernelSet& ks, std::span<const double> gamma);

/// sum_p gamma_p K_p
[[nodiscard]] KernelMatrix combine_linear(const KernelSet& ks, const BallWeights& w);
[[nodiscard]] Matrix combine_linear(const KernelSet& ks, std::span<const double> gamma);

/// What validate_and_repair changed.
struct RepairReport {
  double max_asymmetry = 0.0;     ///< max |K_ij - K_ji| of the raw input
  bool symmetrized = false;       ///< true when max_asymmetry > 0
  double min_eigenvalue = 0.0;    ///< of the symmetrized matrix
  double max_eigenvalue = 0.0;
  bool psd = true;                ///< min_eigenvalue >= -tol * max(|max_eigenvalue|, 1)
  bool psd_repaired = false;
  std::size_t clipped_eigenvalues = 0;
};

struct RepairResult {
  KernelMatrix kernel;
  RepairReport report;
};

/// Symmetrizes a raw matrix and, if `repair` is set and the matrix is not PSD
/// within tolerance, clips its negative eigenvalues to zero by reconstruction.
[[nodiscard]] RepairResult validate_and_repair(const Matrix& raw, std::string name, bool repair);

/// Scales K by n / Tr(K) so that the trace equals n. Throws InputError on Tr(K) <= 0.
[[nodiscard]] KernelMatrix trace_normalize(const KernelMatrix& km);

}  // namespace mkc
