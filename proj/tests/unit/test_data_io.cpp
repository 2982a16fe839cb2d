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
#include "mkc/data_io.hpp"
#include "mkc/error.hpp"
#include "mkc/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

namespace fs = std::filesystem;

namespace mkc {
namespace {

class DataIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mkc_data_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write_text(const fs::path& p, const std::string& text) const {
    std::ofstream out(dir_ / p);
    out << text;
  }

  fs::path dir_;
};

Manifest one_kernel_manifest(std::size_t n, const std::string& path, MatrixFormat format) {
  Manifest man;
  man.n = n;
  man.m = 1;
  man.kernels.push_back(KernelEntry{"k0", path, format});
  return man;
}

TEST_F(DataIoTest, LoadsIdentityCsv) {
  write_text("eye.csv", "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
  write_manifest(one_kernel_manifest(4, "eye.csv", MatrixFormat::csv), dir_ / "manifest.json");
  const auto data = load(dir_ / "manifest.json");
  EXPECT_EQ(data.kernels.m(), 1u);
  EXPECT_EQ(data.kernels.n(), 4);
  EXPECT_TRUE(data.kernels[0].values().isApprox(Matrix::Identity(4, 4), 0.0));
  EXPECT_FALSE(data.labels.has_value());
  ASSERT_EQ(data.reports.size(), 1u);
  EXPECT_TRUE(data.reports[0].psd);
}

TEST_F(DataIoTest, SaveLoadRoundTripIsBitExact) {
  std::mt19937_64 rng(81);
  const auto ks = testing::random_kernel_set(9, 3, rng);
  const ClusterLabels labels{{0, 1, 2, 0, 1, 2, 0, 1, 2}, 3};
  const Manifest man = save(ks, labels, dir_, 3);
  EXPECT_EQ(man.m, 3u);
  ASSERT_TRUE(man.labels_path.has_value());
  const auto data = load(dir_ / "manifest.json");
  ASSERT_EQ(data.kernels.m(), 3u);
  for (std::size_t p = 0; p < 3; ++p) {
    const Matrix& a = ks[p].values();
    const Matrix& b = data.kernels[p].values();
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())), 0);
  }
  ASSERT_TRUE(data.labels.has_value());
  EXPECT_EQ(data.labels->labels, labels.labels);
  EXPECT_EQ(data.manifest.k_true, std::optional<int>(3));
}

TEST_F(DataIoTest, SaveWithoutLabelsOmitsLabelsPath) {
  std::mt19937_64 rng(82);
  const auto ks = testing::random_kernel_set(5, 1, rng);
  const Manifest man = save(ks, std::nullopt, dir_);
  EXPECT_FALSE(man.labels_path.has_value());
  EXPECT_FALSE(fs::exists(dir_ / "labels.txt"));
  EXPECT_FALSE(read_manifest(dir_ / "manifest.json").labels_path.has_value());
}

TEST_F(DataIoTest, KmxRoundTripsSpecialValues) {
  Matrix a(3, 3);
  a << 0.0, -0.0, std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(),
      std::numeric_limits<double>::lowest(), 1.0 / 3.0, std::numeric_limits<double>::epsilon(), -1e-300, 42.0;
  write_kmx(a, dir_ / "a.kmx");
  const Matrix b = read_kmx(dir_ / "a.kmx");
  ASSERT_EQ(b.rows(), 3);
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 9), 0);
  EXPECT_EQ(fs::file_size(dir_ / "a.kmx"), 8u + 4u + 9u * 8u);
}

TEST_F(DataIoTest, KmxHeaderLayout) {
  write_kmx(Matrix::Identity(2, 2), dir_ / "eye.kmx");
  std::ifstream in(dir_ / "eye.kmx", std::ios::binary);
  char header[12];
  in.read(header, 12);
  EXPECT_EQ(std::memcmp(header, "KMXMAT01", 8), 0);
  EXPECT_EQ(static_cast<unsigned char>(header[8]), 2u);
  EXPECT_EQ(header[9], 0);
  EXPECT_EQ(header[10], 0);
  EXPECT_EQ(header[11], 0);
}

TEST_F(DataIoTest, CsvRoundTripIsValueExact) {
  std::mt19937_64 rng(83);
  const Matrix a = testing::random_symmetric(7, rng) * 1e-3;
  write_csv_matrix(a, dir_ / "a.csv");
  const Matrix b = read_csv_matrix(dir_ / "a.csv");
  EXPECT_TRUE((a.array() == b.array()).all());
}

TEST_F(DataIoTest, DimensionMismatchNamesKernel) {
  write_kmx(Matrix::Identity(4, 4), dir_ / "small.kmx");
  Manifest man = one_kernel_manifest(5, "small.kmx", MatrixFormat::kmx);
  man.kernels[0].name = "too_small";
  write_manifest(man, dir_ / "manifest.json");
  try {
    (void)load(dir_ / "manifest.json");
    FAIL() << "expected DimensionMismatchError";
  } catch (const DimensionMismatchError& e) {
    EXPECT_NE(std::string(e.what()).find("too_small"), std::string::npos) << e.what();
  }
}

TEST_F(DataIoTest, DistinctErrors) {
  write_manifest(one_kernel_manifest(2, "absent.kmx", MatrixFormat::kmx), dir_ / "missing.json");
  EXPECT_THROW((void)load(dir_ / "missing.json"), MissingFileError);
  EXPECT_THROW((void)load(dir_ / "no_manifest.json"), MissingFileError);

  write_text("nan.csv", "1,nan\nnan,1\n");
  write_manifest(one_kernel_manifest(2, "nan.csv", MatrixFormat::csv), dir_ / "nan.json");
  EXPECT_THROW((void)load(dir_ / "nan.json"), NonFiniteValueError);

  write_text("bad.kmx", "NOTAKMX!\x02\x00\x00\x00");
  write_manifest(one_kernel_manifest(2, "bad.kmx", MatrixFormat::kmx), dir_ / "bad.json");
  EXPECT_THROW((void)load(dir_ / "bad.json"), FormatError);

  write_text("broken.json", "{ \"n\": 3, ");
  EXPECT_THROW((void)load(dir_ / "broken.json"), FormatError);

  write_text("ragged.csv", "1,0\n0\n");
  EXPECT_THROW((void)read_csv_matrix(dir_ / "ragged.csv"), FormatError);
}

TEST_F(DataIoTest, AsymmetricInputIsSymmetrizedAndReported) {
  write_text("asym.csv", "2,1\n0,2\n");
  write_manifest(one_kernel_manifest(2, "asym.csv", MatrixFormat::csv), dir_ / "manifest.json");
  const auto data = load(dir_ / "manifest.json");
  EXPECT_TRUE(data.reports[0].symmetrized);
  EXPECT_DOUBLE_EQ(data.kernels[0].values()(0, 1), data.kernels[0].values()(1, 0));
}

TEST_F(DataIoTest, LabelLengthMustMatch) {
  write_kmx(Matrix::Identity(3, 3), dir_ / "eye.kmx");
  write_text("labels.txt", "0\n1\n");
  Manifest man = one_kernel_manifest(3, "eye.kmx", MatrixFormat::kmx);
  man.labels_path = "labels.txt";
  write_manifest(man, dir_ / "manifest.json");
  EXPECT_THROW((void)load(dir_ / "manifest.json"), DimensionMismatchError);
}

TEST_F(DataIoTest, SyntheticSpecRoundTrip) {
  SyntheticSpec spec;
  spec.n_per_cluster = 7;
  spec.k = 3;
  spec.dim = 4;
  spec.separation = 2.5;
  spec.recipes = {{KernelType::rbf, 1.5, 2}, {KernelType::polynomial, 1.0, 3}, {KernelType::cosine, 1.0, 2}};
  spec.noise_kernels = 2;
  spec.noise_rank = 2;
  spec.seed = 1234567890123ULL;
  write_synthetic_spec(spec, dir_ / "spec.json");
  const SyntheticSpec back = read_synthetic_spec(dir_ / "spec.json");
  EXPECT_EQ(back.n_per_cluster, 7);
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(back.dim, 4);
  EXPECT_EQ(back.separation, 2.5);
  ASSERT_EQ(back.recipes.size(), 3u);
  EXPECT_EQ(back.recipes[0].sigma, 1.5);
  EXPECT_EQ(back.recipes[1].degree, 3);
  EXPECT_EQ(back.recipes[2].type, KernelType::cosine);
  EXPECT_EQ(back.noise_kernels, 2);
  EXPECT_EQ(back.noise_rank, 2);
  EXPECT_EQ(back.seed, spec.seed);
}

SyntheticSpec two_cluster_spec() {
  SyntheticSpec spec;
  spec.n_per_cluster = 20;
  spec.k = 2;
  spec.dim = 2;
  spec.separation = 10.0;
  spec.recipes = {{KernelType::rbf, 1.0, 2}, {KernelType::linear, 1.0, 2}};
  spec.seed = 5;
  return spec;
}

TEST(Generate, RbfIsNearBlockDiagonalAtLargeSeparation) {
  const auto data = generate(two_cluster_spec());
  const Matrix& k = data.kernels[0].values();
  double cross = 0.0;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    for (std::size_t j = 0; j < data.labels.size(); ++j) {
      if (data.labels.labels[i] != data.labels.labels[j]) {
        cross = std::max(cross, std::abs(k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
  }
  EXPECT_LT(cross, 1e-8);
}

TEST(Generate, KernelsAreSymmetricTraceNormalizedAndPsd) {
  SyntheticSpec spec = two_cluster_spec();
  spec.recipes.push_back({KernelType::polynomial, 1.0, 2});
  spec.recipes.push_back({KernelType::cosine, 1.0, 2});
  spec.noise_kernels = 2;
  const auto data = generate(spec);
  EXPECT_EQ(data.kernels.m(), 6u);
  EXPECT_EQ(data.kernels.n(), 40);
  for (const auto& km : data.kernels) {
    EXPECT_TRUE(km.values().isApprox(km.values().transpose(), 0.0)) << km.name();
    EXPECT_NEAR(km.trace(), 40.0, 1e-9) << km.name();
    const auto rep = validate_and_repair(km.values(), km.name(), false).report;
    EXPECT_TRUE(rep.psd) << km.name();
  }
  const Matrix& cosine = data.kernels[3].values();
  EXPECT_LE(cosine.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
}

TEST(Generate, IsDeterministicInSeed) {
  SyntheticSpec spec = two_cluster_spec();
  spec.noise_kernels = 1;
  const auto a = generate(spec);
  const auto b = generate(spec);
  for (std::size_t p = 0; p < a.kernels.m(); ++p) {
    EXPECT_TRUE((a.kernels[p].values().array() == b.kernels[p].values().array()).all());
  }
  EXPECT_EQ(a.labels.labels, b.labels.labels);
  spec.seed = 6;
  EXPECT_FALSE((generate(spec).kernels[0].values().array() == a.kernels[0].values().array()).all());
}

TEST(Generate, SeparableDataGivesPerfectAverageKernelKmeans) {
  SyntheticSpec spec = two_cluster_spec();
  spec.k = 3;
  spec.dim = 3;
  const auto data = generate(spec);
  const auto res = avg_kkm(data.kernels, 3, 1);
  EXPECT_DOUBLE_EQ(clustering_accuracy(res.labels.labels, data.labels.labels), 1.0);
}

TEST(Generate, RejectsDegenerateSpecs) {
  SyntheticSpec spec = two_cluster_spec();
  spec.recipes.clear();
  EXPECT_THROW((void)generate(spec), InputError);
  spec = two_cluster_spec();
  spec.separation = 0.0;
  EXPECT_THROW((void)generate(spec), InputError);
  spec = two_cluster_spec();
  spec.noise_rank = 0;
  EXPECT_THROW((void)generate(spec), InputError);
}

}  // namespace
}  // namespace mkc
