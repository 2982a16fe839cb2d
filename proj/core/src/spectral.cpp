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

#include "mkc/spectral.hpp"

#include "mkc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace mkc {

Partition::Partition(Matrix h) : h_(std::move(h)) {
  if (h_.cols() < 1 || h_.rows() < h_.cols()) {
    throw InputError("partition must be n x k with 1 <= k <= n");
  }
  const Matrix gram = h_.transpose() * h_;
  const double dev = (gram - Matrix::Identity(h_.cols(), h_.cols())).norm();
  if (!(dev <= kOrthonormalityTolerance)) {
    throw InputError("partition columns are not orthonormal (||H^T H - I||_F = " + std::to_string(dev) + ")");
  }
}

double alignment(const Matrix& k_mat, const Matrix& h) {
  if (k_mat.rows() != h.rows() || k_mat.cols() != h.rows()) {
    throw InputError("alignment: kernel is " + std::to_string(k_mat.rows()) + "x" +
                     std::to_string(k_mat.cols()) + " but H has " + std::to_string(h.rows()) + " rows");
  }
  return (k_mat * h).cwiseProduct(h).sum();
}

EigenSolution solve_relaxed_kkm(const Matrix& k_mat, int k) {
  const Eigen::Index n = k_mat.rows();
  if (k_mat.cols() != n) {
    throw InputError("solve_relaxed_kkm: kernel is not square");
  }
  if (k < 1 || k >= n) {
    throw InputError("solve_relaxed_kkm: need 1 <= k < n (k = " + std::to_string(k) +
                     ", n = " + std::to_string(n) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k_mat);
  if (eig.info() != Eigen::Success) {
    throw NumericError("solve_relaxed_kkm: eigendecomposition did not converge");
  }
  const Vector& evals = eig.eigenvalues();
  if (!evals.allFinite()) {
    throw NumericError("solve_relaxed_kkm: non-finite eigenvalues");
  }

  // Eigen returns ascending order; reorder descending, ties kept in index order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return evals[a] > evals[b]; });

  Matrix h(n, k);
  Vector sorted(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted[i] = evals[order[static_cast<std::size_t>(i)]];
  }
  for (int j = 0; j < k; ++j) {
    h.col(j) = eig.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  const double objective = sorted.head(k).sum();
  const double gap = sorted[k - 1] - sorted[k];
  return EigenSolution{Partition(std::move(h)), objective, gap, std::move(sorted)};
}

EigenSolution solve_relaxed_kkm(const KernelMatrix& km, int k) { return solve_relaxed_kkm(km.values(), k); }

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  // 53 random bits; std::uniform_real_distribution is not reproducible across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Matrix kmeans_plus_plus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  auto pick_uniform = [&] {
    return std::min<Eigen::Index>(static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n)), n - 1);
  };
  centroids.row(0) = points.row(pick_uniform());
  Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick_uniform();
    }
    centroids.row(c) = points.row(chosen);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels, Vector& dist2) {
  const Eigen::Index n = points.rows();
  const int k = static_cast<int>(centroids.rows());
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int c = 0; c < k; ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    dist2[i] = best;
    inertia += best;
  }
  return inertia;
}

// An empty cluster takes over the point farthest from its current centroid.
// Returns the per-cluster counts after repair.
std::vector<Eigen::Index> repair_empty_clusters(int k, std::vector<int>& labels, Vector& dist2) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    ++counts[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] != 0) {
      continue;
    }
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] > 1 && dist2[i] > far_d) {
        far_d = dist2[i];
        far = i;
      }
    }
    if (far < 0) {
      break;
    }
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = c;
    counts[static_cast<std::size_t>(c)] = 1;
    dist2[far] = 0.0;
  }
  return counts;
}

}  // namespace

KMeansResult lloyd_kmeans(const Matrix& points, int k, std::uint64_t rng_seed, const DiscretizeOptions& opts) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n) {
    throw InputError("lloyd_kmeans: need 1 <= k <= n");
  }
  auto rng = make_stream(rng_seed, 0);
  KMeansResult res;
  res.centroids = kmeans_plus_plus(points, k, rng);
  res.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist2(n);

  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it + 1;
    assign(points, res.centroids, res.labels, dist2);

    const auto counts = repair_empty_clusters(k, res.labels, dist2);

    Matrix updated = Matrix::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      updated.row(res.labels[static_cast<std::size_t>(i)]) += points.row(i);
    }
    for (int c = 0; c < k; ++c) {
      const auto cnt = counts[static_cast<std::size_t>(c)];
      if (cnt > 0) {
        updated.row(c) /= static_cast<double>(cnt);
      } else {
        updated.row(c) = res.centroids.row(c);
      }
    }
    const double shift = (updated - res.centroids).rowwise().norm().maxCoeff();
    res.centroids = std::move(updated);
    if (shift <= opts.shift_tolerance) {
      break;
    }
  }
  assign(points, res.centroids, res.labels, dist2);
  repair_empty_clusters(k, res.labels, dist2);
  res.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    res.inertia += (points.row(i) - res.centroids.row(res.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return res;
}

ClusterLabels discretize(const Partition& p, int restarts, std::uint64_t rng_seed, const DiscretizeOptions& opts) {
  if (restarts < 1) {
    throw InputError("discretize: restarts must be >= 1");
  }
  Matrix rows = p.h();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) {
      rows.row(i) /= norm;
    }
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::uint64_t sub_seed = 0;
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    sub_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    auto run = lloyd_kmeans(rows, p.k(), sub_seed, opts);
    if (run.inertia < best.inertia) {
      best = std::move(run);
    }
  }
  return ClusterLabels{std::move(best.labels), p.k()};
}

}  // namespace mkc
