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

#include <cstddef>
#include <span>
#include <vector>

namespace mkc {

struct MetricTriple {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation; 0 for a single run
};

struct AggregateReport {
  MeanStd acc;
  MeanStd nmi;
  MeanStd purity;
  std::size_t count = 0;
};

/// Scalars entering the generalization bound.
struct BoundInputs {
  double empirical_term = 0.0;
  double b = 1.0;      ///< |K_p(x, x')| <= b
  int k = 1;
  double n = 1.0;      ///< sample count (real-valued so asymptotic checks can use large n)
  double delta = 0.05; ///< confidence parameter in (0, 1)
};

/// Dense k x k' contingency table; rows index the predicted cluster ids, columns
/// the true class ids, both after compacting to 0..k-1 in first-seen order.
[[nodiscard]] Eigen::MatrixXd contingency(std::span<const int> pred, std::span<const int> truth);

/// Max-weight perfect matching on a (padded) square matrix; returns row -> column.
[[nodiscard]] std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

[[nodiscard]] double clustering_accuracy(std::span<const int> pred, std::span<const int> truth);
[[nodiscard]] double nmi(std::span<const int> pred, std::span<const int> truth);
[[nodiscard]] double purity(std::span<const int> pred, std::span<const int> truth);

[[nodiscard]] MetricTriple evaluate(std::span<const int> pred, std::span<const int> truth);
[[nodiscard]] inline MetricTriple evaluate(const ClusterLabels& pred, const ClusterLabels& truth) {
  return evaluate(pred.labels, truth.labels);
}

[[nodiscard]] AggregateReport aggregate(std::span<const MetricTriple> runs);
[[nodiscard]] MeanStd mean_std(std::span<const double> values);

/// empirical + sqrt(pi/2) b k / sqrt(n) + (1 + b) sqrt(log(1/delta) / (2n))
[[nodiscard]] double generalization_bound(const BoundInputs& bi);

/// 1 - Tr(K_gamma H H^T) / n. May be negative when kernels are not sup-normalized.
[[nodiscard]] double empirical_alignment_upper_bound(const KernelMatrix& km_combined, const Partition& p,
                                                     Eigen::Index n);

}  // namespace mkc
