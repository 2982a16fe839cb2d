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

#include <cstdint>
#include <vector>

namespace mkc {

inline constexpr double kOrthonormalityTolerance = 1e-8;

/// Relaxed clustering matrix H (n x k) with orthonormal columns.
class Partition {
 public:
  /// Throws InputError if ||H^T H - I_k||_F exceeds kOrthonormalityTolerance.
  explicit Partition(Matrix h);

  [[nodiscard]] const Matrix& h() const { return h_; }
  [[nodiscard]] Eigen::Index n() const { return h_.rows(); }
  [[nodiscard]] int k() const { return static_cast<int>(h_.cols()); }

 private:
  Matrix h_;
};

/// Optimum of max_H Tr(K H H^T) s.t. H^T H = I_k.
struct EigenSolution {
  Partition partition;
  double objective = 0.0;  ///< sum of the k largest eigenvalues
  double eigen_gap = 0.0;  ///< lambda_k - lambda_{k+1}
  Vector eigenvalues;      ///< all eigenvalues, descending
};

/// Hard assignments with values in [0, k).
struct ClusterLabels {
  std::vector<int> labels;
  int k = 0;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
};

/// Top-k eigenvectors of a symmetric matrix, eigenvalues sorted descending
/// (stable on ties). Requires 1 <= k < n.
[[nodiscard]] EigenSolution solve_relaxed_kkm(const Matrix& k_mat, int k);
[[nodiscard]] EigenSolution solve_relaxed_kkm(const KernelMatrix& km, int k);

/// Tr(K H H^T) computed as sum_ij (K H)_ij H_ij.
[[nodiscard]] double alignment(const Matrix& k_mat, const Matrix& h);

struct DiscretizeOptions {
  int max_iter = 300;
  double shift_tolerance = 1e-9;
};

/// Rounds H to hard labels by Lloyd's k-means on the unit-normalized rows of H.
/// Runs `restarts` k-means++ initializations and keeps the one with the lowest
/// within-cluster sum of squares (earliest restart wins ties).
[[nodiscard]] ClusterLabels discretize(const Partition& p, int restarts, std::uint64_t rng_seed,
                                       const DiscretizeOptions& opts = {});

/// Lloyd's k-means on the rows of `points`. Exposed for testing; `discretize` calls it.
struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
};
[[nodiscard]] KMeansResult lloyd_kmeans(const Matrix& points, int k, std::uint64_t rng_seed,
                                        const DiscretizeOptions& opts = {});

}  // namespace mkc
