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

#include "mkc/metrics.hpp"

#include "mkc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

namespace mkc {

namespace {

void require_same_length(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw InputError("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                     std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) {
    throw InputError("label vectors are empty");
  }
}

std::vector<int> compact(std::span<const int> labels, int& count) {
  std::unordered_map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  count = static_cast<int>(ids.size());
  return out;
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0.0) {
      const double p = counts[i] / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

Eigen::MatrixXd contingency(std::span<const int> pred, std::span<const int> truth) {
  require_same_length(pred, truth);
  int kp = 0;
  int kt = 0;
  const auto p = compact(pred, kp);
  const auto t = compact(truth, kt);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kp, kt);
  for (std::size_t i = 0; i < p.size(); ++i) {
    c(p[i], t[i]) += 1.0;
  }
  return c;
}

// Hungarian algorithm (shortest augmenting path with potentials) on cost = -weights.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
  const auto size = static_cast<int>(std::max(weights.rows(), weights.cols()));
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(size, size);
  cost.topLeftCorner(weights.rows(), weights.cols()) = -weights;

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<int> col_owner(static_cast<std::size_t>(size) + 1, 0);  // 1-based row matched to column j
  std::vector<int> way(static_cast<std::size_t>(size) + 1, 0);

  for (int row = 1; row <= size; ++row) {
    col_owner[0] = row;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(size) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(size) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = col_owner[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          continue;
        }
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(col_owner[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      col_owner[static_cast<std::size_t>(j0)] = col_owner[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(size), -1);
  for (int j = 1; j <= size; ++j) {
    row_to_col[static_cast<std::size_t>(col_owner[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

double clustering_accuracy(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXd c = contingency(pred, truth);
  const auto match = max_weight_assignment(c);
  double hits = 0.0;
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    const int col = match[static_cast<std::size_t>(r)];
    if (col < c.cols()) {
      hits += c(r, col);
    }
  }
  return hits / static_cast<double>(pred.size());
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXd c = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  const Eigen::VectorXd rows = c.rowwise().sum();
  const Eigen::VectorXd cols = c.colwise().sum().transpose();
  // Terms are summed in sorted order so that nmi(a, b) == nmi(b, a) bit for bit.
  std::vector<double> terms;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) > 0.0) {
        terms.push_back((c(i, j) / n) * std::log(c(i, j) * n / (rows[i] * cols[j])));
      }
    }
  }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) {
    mi += t;
  }
  const double denom = std::sqrt(entropy(rows, n) * entropy(cols, n));
  if (!(denom > 0.0)) {
    return 0.0;
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double purity(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXd c = contingency(pred, truth);
  return c.rowwise().maxCoeff().sum() / static_cast<double>(pred.size());
}

MetricTriple evaluate(std::span<const int> pred, std::span<const int> truth) {
  return MetricTriple{clustering_accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) {
    throw InputError("mean_std: no values");
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= n;
  // Constant input: report the value itself and an exact zero spread.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return {values.front(), 0.0};
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0))};
}

AggregateReport aggregate(std::span<const MetricTriple> runs) {
  if (runs.empty()) {
    throw InputError("aggregate: no runs");
  }
  std::vector<double> acc;
  std::vector<double> nm;
  std::vector<double> pur;
  for (const auto& r : runs) {
    acc.push_back(r.acc);
    nm.push_back(r.nmi);
    pur.push_back(r.purity);
  }
  return AggregateReport{mean_std(acc), mean_std(nm), mean_std(pur), runs.size()};
}

double generalization_bound(const BoundInputs& bi) {
  if (!(bi.delta > 0.0 && bi.delta < 1.0)) {
    throw InputError("generalization_bound: delta must lie in (0, 1)");
  }
  if (!(bi.b > 0.0)) {
    throw InputError("generalization_bound: b must be > 0");
  }
  if (!(bi.n >= 1.0)) {
    throw InputError("generalization_bound: n must be >= 1");
  }
  if (bi.k < 1) {
    throw InputError("generalization_bound: k must be >= 1");
  }
  const double complexity = std::sqrt(std::numbers::pi / 2.0) * bi.b * static_cast<double>(bi.k) / std::sqrt(bi.n);
  const double confidence = (1.0 + bi.b) * std::sqrt(std::log(1.0 / bi.delta) / (2.0 * bi.n));
  return bi.empirical_term + complexity + confidence;
}

double empirical_alignment_upper_bound(const KernelMatrix& km_combined, const Partition& p, Eigen::Index n) {
  if (km_combined.n() != p.n() || n != p.n()) {
    throw DimensionMismatchError("empirical_alignment_upper_bound: kernel, partition and n disagree");
  }
  return 1.0 - alignment(km_combined.values(), p.h()) / static_cast<double>(n);
}

}  // namespace mkc
