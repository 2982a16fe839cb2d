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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mkc {

enum class MatrixFormat { csv, kmx };

struct KernelEntry {
  std::string name;
  std::string path;  ///< relative to the manifest directory unless absolute
  MatrixFormat format = MatrixFormat::kmx;
};

/// On-disk description of a kernel set (JSON; see README for the schema).
struct Manifest {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<KernelEntry> kernels;
  std::optional<std::string> labels_path;
  std::optional<int> k_true;
  bool repair_psd = false;
  bool trace_normalize = true;
};

[[nodiscard]] Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

// kmx: 8-byte magic "KMXMAT01", uint32 little-endian n, n*n little-endian
// IEEE-754 doubles in row-major order.
inline constexpr char kKmxMagic[8] = {'K', 'M', 'X', 'M', 'A', 'T', '0', '1'};

[[nodiscard]] Matrix read_kmx(const std::filesystem::path& path);
void write_kmx(const Matrix& values, const std::filesystem::path& path);

/// Comma-separated rows, no header; written with shortest round-trip formatting.
[[nodiscard]] Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const Matrix& values, const std::filesystem::path& path);

/// One integer label per line.
[[nodiscard]] ClusterLabels read_labels(const std::filesystem::path& path);
void write_labels(const ClusterLabels& labels, const std::filesystem::path& path);

struct LoadedData {
  KernelSet kernels;
  std::optional<ClusterLabels> labels;
  Manifest manifest;
  std::vector<RepairReport> reports;  ///< one per kernel, in manifest order
};

/// Loads and validates every kernel named by a manifest. Kernels are symmetrized,
/// PSD-repaired when the manifest asks for it, then trace-normalized unless disabled.
[[nodiscard]] LoadedData load(const std::filesystem::path& manifest_path);

/// Writes kernel_<p>.kmx files, labels.txt (when labels are given) and manifest.json
/// into `dir`. The written manifest disables trace normalization so that a
/// subsequent load reproduces the values bit for bit.
Manifest save(const KernelSet& ks, const std::optional<ClusterLabels>& labels, const std::filesystem::path& dir,
              std::optional<int> k_true = std::nullopt);

enum class KernelType { rbf, polynomial, linear, cosine };

struct KernelRecipe {
  KernelType type = KernelType::rbf;
  double sigma = 1.0;  ///< rbf bandwidth
  int degree = 2;      ///< polynomial degree, kernel (x.y / dim + 1)^degree
};

struct SyntheticSpec {
  int n_per_cluster = 50;
  int k = 2;
  int dim = 2;
  double separation = 5.0;
  std::vector<KernelRecipe> recipes;
  int noise_kernels = 0;
  int noise_rank = 1;  ///< rows of the Gaussian factor A in A^T A (rank of each noise kernel)
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  KernelSet kernels;
  ClusterLabels labels;
};

/// Gaussian clusters with means separation * u_c (u_c orthonormal when k <= dim,
/// random unit vectors otherwise) and unit isotropic noise. One kernel per recipe on
/// the centered points, then `noise_kernels` random A^T A Gram matrices. Every
/// kernel is trace-normalized. Deterministic in the seed.
[[nodiscard]] SyntheticData generate(const SyntheticSpec& spec);

[[nodiscard]] SyntheticSpec read_synthetic_spec(const std::filesystem::path& path);
void write_synthetic_spec(const SyntheticSpec& spec, const std::filesystem::path& path);

[[nodiscard]] std::string to_string(KernelType type);
[[nodiscard]] std::string to_string(MatrixFormat format);

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace mkc
