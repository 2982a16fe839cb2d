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

#include "mkc/kernel.hpp"

#include "mkc/error.hpp"

#include <cmath>
#include <utility>

namespace mkc {

namespace {

void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite()) {
    throw InputError("kernel '" + name + "' contains NaN or Inf entries");
  }
}

void require_length(const KernelSet& ks, std::size_t len) {
  if (len != ks.m()) {
    throw InputError("weight vector has length " + std::to_string(len) + " but kernel set has m = " +
                     std::to_string(ks.m()));
  }
}

}  // namespace

KernelMatrix::KernelMatrix(Matrix values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
  if (values_.rows() != values_.cols()) {
    throw InputError("kernel '" + name_ + "' is not square (" + std::to_string(values_.rows()) + "x" +
                     std::to_string(values_.cols()) + ")");
  }
  if (values_.rows() == 0) {
    throw InputError("kernel '" + name_ + "' is empty");
  }
  require_finite(values_, name_);
  // (a + b) / 2 == a when a == b, so symmetric input passes through unchanged.
  Matrix sym = (values_ + values_.transpose()) * 0.5;
  values_ = std::move(sym);
}

KernelSet::KernelSet(std::vector<KernelMatrix> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) {
    throw InputError("kernel set must contain at least one kernel");
  }
  n_ = kernels_.front().n();
  for (const auto& k : kernels_) {
    if (k.n() != n_) {
      throw DimensionMismatchError("kernel '" + k.name() + "' has n = " + std::to_string(k.n()) +
                                   ", expected " + std::to_string(n_));
    }
  }
}

SimplexWeights::SimplexWeights(Vector gamma) : gamma_(std::move(gamma)) {
  if (gamma_.size() == 0) {
    throw InputError("simplex weights must be non-empty");
  }
  if (!gamma_.allFinite()) {
    throw InputError("simplex weights contain non-finite entries");
  }
  if (gamma_.minCoeff() < 0.0) {
    throw InputError("simplex weights must be nonnegative");
  }
  if (std::abs(gamma_.sum() - 1.0) > kSimplexTolerance) {
    throw InputError("simplex weights must sum to 1");
  }
}

SimplexWeights SimplexWeights::uniform(std::size_t m) {
  if (m == 0) {
    throw InputError("simplex weights must be non-empty");
  }
  return SimplexWeights(Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)));
}

SimplexWeights SimplexWeights::renormalized(Vector gamma) {
  if (gamma.size() == 0 || !gamma.allFinite()) {
    throw InputError("cannot renormalize empty or non-finite weights");
  }
  gamma = gamma.cwiseMax(0.0);
  const double total = gamma.sum();
  if (!(total > 0.0)) {
    throw InputError("cannot renormalize weights with no positive entry");
  }
  gamma /= total;
  return SimplexWeights(std::move(gamma));
}

BallWeights::BallWeights(Vector gamma) : gamma_(std::move(gamma)) {
  if (gamma_.size() == 0) {
    throw InputError("ball weights must be non-empty");
  }
  if (!gamma_.allFinite()) {
    throw InputError("ball weights contain non-finite entries");
  }
  if (gamma_.minCoeff() < 0.0) {
    throw InputError("ball weights must be nonnegative");
  }
  if (gamma_.norm() > 1.0 + kSimplexTolerance) {
    throw InputError("ball weights must have Euclidean norm <= 1");
  }
}

BallWeights BallWeights::uniform(std::size_t m) {
  if (m == 0) {
    throw InputError("ball weights must be non-empty");
  }
  return BallWeights(
      Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / std::sqrt(static_cast<double>(m))));
}

Matrix combine_squared(const KernelSet& ks, std::span<const double> gamma) {
  require_length(ks, gamma.size());
  Matrix out = Matrix::Zero(ks.n(), ks.n());
  for (std::size_t p = 0; p < ks.m(); ++p) {
    const double g = gamma[p];
    if (g != 0.0) {
      out.noalias() += (g * g) * ks[p].values();
    }
  }
  return out;
}

KernelMatrix combine_squared(const KernelSet& ks, const SimplexWeights& w) {
  return KernelMatrix(combine_squared(ks, std::span<const double>(w.values().data(), w.size())),
                      "combined");
}

Matrix combine_linear(const KernelSet& ks, std::span<const double> gamma) {
  require_length(ks, gamma.size());
  Matrix out = Matrix::Zero(ks.n(), ks.n());
  for (std::size_t p = 0; p < ks.m(); ++p) {
    if (gamma[p] != 0.0) {
      out.noalias() += gamma[p] * ks[p].values();
    }
  }
  return out;
}

KernelMatrix combine_linear(const KernelSet& ks, const BallWeights& w) {
  return KernelMatrix(combine_linear(ks, std::span<const double>(w.values().data(), w.size())),
                      "combined");
}

RepairResult validate_and_repair(const Matrix& raw, std::string name, bool repair) {
  if (raw.rows() != raw.cols()) {
    throw InputError("kernel '" + name + "' is not square (" + std::to_string(raw.rows()) + "x" +
                     std::to_string(raw.cols()) + ")");
  }
  require_finite(raw, name);

  RepairReport report;
  report.max_asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  report.symmetrized = report.max_asymmetry > 0.0;

  KernelMatrix km(raw, name);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(km.values());
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigendecomposition failed while validating kernel '" + name + "'");
  }
  const Vector& evals = eig.eigenvalues();
  report.min_eigenvalue = evals.minCoeff();
  report.max_eigenvalue = evals.maxCoeff();
  const double scale = std::max(std::abs(report.max_eigenvalue), 1e-300);
  report.psd = report.min_eigenvalue >= -kPsdRelativeTolerance * scale;

  if (repair && !report.psd) {
    Vector clipped = evals;
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
      if (clipped[i] < 0.0) {
        clipped[i] = 0.0;
        ++report.clipped_eigenvalues;
      }
    }
    const Matrix& v = eig.eigenvectors();
    Matrix rebuilt = v * clipped.asDiagonal() * v.transpose();
    report.psd_repaired = true;
    return {KernelMatrix(std::move(rebuilt), std::move(name)), report};
  }
  return {std::move(km), report};
}

KernelMatrix trace_normalize(const KernelMatrix& km) {
  const double tr = km.trace();
  if (!(tr > 0.0)) {
    throw InputError("kernel '" + km.name() + "' has non-positive trace; cannot trace-normalize");
  }
  const double scale = static_cast<double>(km.n()) / tr;
  if (scale == 1.0) {
    return km;
  }
  return KernelMatrix(km.values() * scale, km.name());
}

}  // namespace mkc
