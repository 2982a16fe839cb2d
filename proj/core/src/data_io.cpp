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

#include "mkc/data_io.hpp"

#include "mkc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <system_error>

namespace mkc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw IoError("failed to format double");
  }
  return std::string(buf.data(), ptr);
}

std::string to_string(KernelType type) {
  switch (type) {
    case KernelType::rbf:
      return "rbf";
    case KernelType::polynomial:
      return "polynomial";
    case KernelType::linear:
      return "linear";
    case KernelType::cosine:
      return "cosine";
  }
  return "unknown";
}

std::string to_string(MatrixFormat format) { return format == MatrixFormat::csv ? "csv" : "kmx"; }

namespace {

void require_exists(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw MissingFileError(what + " not found: " + path.string());
  }
}

std::ifstream open_in(const fs::path& path, const std::string& what, std::ios::openmode mode = std::ios::in) {
  require_exists(path, what);
  std::ifstream in(path, mode);
  if (!in) {
    throw IoError("cannot open " + what + ": " + path.string());
  }
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000000000FFull) << 56) | ((v & 0x000000000000FF00ull) << 40) |
        ((v & 0x0000000000FF0000ull) << 24) | ((v & 0x00000000FF000000ull) << 8) |
        ((v & 0x000000FF00000000ull) >> 8) | ((v & 0x0000FF0000000000ull) >> 24) |
        ((v & 0x00FF000000000000ull) >> 40) | ((v & 0xFF00000000000000ull) >> 56);
  }
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double parse_double(std::string_view field, const fs::path& path, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    // from_chars rejects "nan"/"inf" spellings it did not produce; report them as non-finite.
    throw NonFiniteValueError("unparsable value '" + std::string(field) + "' at " + path.string() + ":" +
                              std::to_string(line));
  }
  if (!std::isfinite(value)) {
    throw NonFiniteValueError("non-finite value at " + path.string() + ":" + std::to_string(line));
  }
  return value;
}

MatrixFormat parse_format(const std::string& s) {
  if (s == "kmx") {
    return MatrixFormat::kmx;
  }
  if (s == "csv") {
    return MatrixFormat::csv;
  }
  throw FormatError("unknown kernel format '" + s + "' (expected csv or kmx)");
}

KernelType parse_kernel_type(const std::string& s) {
  if (s == "rbf") {
    return KernelType::rbf;
  }
  if (s == "polynomial") {
    return KernelType::polynomial;
  }
  if (s == "linear") {
    return KernelType::linear;
  }
  if (s == "cosine") {
    return KernelType::cosine;
  }
  throw FormatError("unknown kernel recipe type '" + s + "'");
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

Matrix read_kmx(const fs::path& path) {
  auto in = open_in(path, "kmx file", std::ios::binary);
  std::array<unsigned char, 12> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size()) ||
      !std::equal(std::begin(kKmxMagic), std::end(kKmxMagic), header.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    throw FormatError("bad kmx header in " + path.string());
  }
  const std::uint32_t n = get_u32(header.data() + 8);
  const std::size_t count = static_cast<std::size_t>(n) * n;
  std::vector<std::uint64_t> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(std::uint64_t)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(std::uint64_t))) {
    throw FormatError("truncated kmx payload in " + path.string());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after kmx payload in " + path.string());
  }
  Matrix m(n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      m(i, j) = std::bit_cast<double>(to_little_endian(raw[static_cast<std::size_t>(i) * n + j]));
    }
  }
  return m;
}

void write_kmx(const Matrix& values, const fs::path& path) {
  if (values.rows() != values.cols()) {
    throw InputError("write_kmx: matrix is not square");
  }
  if (values.rows() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("write_kmx: matrix too large");
  }
  auto out = open_out(path, std::ios::binary);
  out.write(kKmxMagic, sizeof(kKmxMagic));
  const auto n = static_cast<std::uint32_t>(values.rows());
  put_u32(out, n);
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      raw[static_cast<std::size_t>(i) * n + j] = to_little_endian(std::bit_cast<std::uint64_t>(values(i, j)));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 8));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

Matrix read_csv_matrix(const fs::path& path) {
  auto in = open_in(path, "csv file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") {
      continue;
    }
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), path, lineno));
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("ragged csv row " + std::to_string(lineno) + " in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_csv_matrix(const Matrix& values, const fs::path& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_double(values(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

ClusterLabels read_labels(const fs::path& path) {
  auto in = open_in(path, "labels file");
  ClusterLabels labels;
  std::set<int> distinct;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    int v = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw FormatError("bad label '" + line + "' at " + path.string() + ":" + std::to_string(lineno));
    }
    labels.labels.push_back(v);
    distinct.insert(v);
  }
  labels.k = static_cast<int>(distinct.size());
  return labels;
}

void write_labels(const ClusterLabels& labels, const fs::path& path) {
  auto out = open_out(path);
  for (int l : labels.labels) {
    out << l << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

Manifest read_manifest(const fs::path& path) {
  auto in = open_in(path, "manifest");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
  Manifest man;
  try {
    man.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("kernels")) {
      KernelEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.name = e.value("name", fs::path(entry.path).stem().string());
      entry.format = parse_format(e.value("format", std::string("kmx")));
      man.kernels.push_back(std::move(entry));
    }
    man.m = j.value("m", man.kernels.size());
    if (j.contains("labels_path") && !j["labels_path"].is_null()) {
      man.labels_path = j["labels_path"].get<std::string>();
    }
    if (j.contains("k_true") && !j["k_true"].is_null()) {
      man.k_true = j["k_true"].get<int>();
    }
    man.repair_psd = j.value("repair_psd", false);
    man.trace_normalize = j.value("trace_normalize", true);
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (man.kernels.empty()) {
    throw FormatError("manifest " + path.string() + " lists no kernels");
  }
  if (man.m != man.kernels.size()) {
    throw FormatError("manifest " + path.string() + " declares m = " + std::to_string(man.m) + " but lists " +
                      std::to_string(man.kernels.size()) + " kernels");
  }
  return man;
}

void write_manifest(const Manifest& man, const fs::path& path) {
  json j;
  j["format"] = "mkc-manifest";
  j["version"] = 1;
  j["n"] = man.n;
  j["m"] = man.m;
  json kernels = json::array();
  for (const auto& e : man.kernels) {
    kernels.push_back({{"name", e.name}, {"path", e.path}, {"format", to_string(e.format)}});
  }
  j["kernels"] = std::move(kernels);
  if (man.labels_path) {
    j["labels_path"] = *man.labels_path;
  }
  if (man.k_true) {
    j["k_true"] = *man.k_true;
  }
  j["repair_psd"] = man.repair_psd;
  j["trace_normalize"] = man.trace_normalize;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

LoadedData load(const fs::path& manifest_path) {
  Manifest man = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  std::vector<KernelMatrix> kernels;
  std::vector<RepairReport> reports;
  for (const auto& entry : man.kernels) {
    const fs::path file = resolve(base, entry.path);
    Matrix raw = entry.format == MatrixFormat::kmx ? read_kmx(file) : read_csv_matrix(file);
    if (raw.rows() != static_cast<Eigen::Index>(man.n) || raw.cols() != static_cast<Eigen::Index>(man.n)) {
      throw DimensionMismatchError("kernel '" + entry.name + "' (" + file.string() + ") is " +
                                   std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()) +
                                   " but the manifest declares n = " + std::to_string(man.n));
    }
    if (!raw.allFinite()) {
      throw NonFiniteValueError("kernel '" + entry.name + "' contains NaN or Inf entries");
    }
    auto repaired = validate_and_repair(raw, entry.name, man.repair_psd);
    reports.push_back(repaired.report);
    kernels.push_back(man.trace_normalize ? trace_normalize(repaired.kernel) : std::move(repaired.kernel));
  }
  std::optional<ClusterLabels> labels;
  if (man.labels_path) {
    labels = read_labels(resolve(base, *man.labels_path));
    if (labels->size() != man.n) {
      throw DimensionMismatchError("labels file has " + std::to_string(labels->size()) +
                                   " entries but the manifest declares n = " + std::to_string(man.n));
    }
  }
  return LoadedData{KernelSet(std::move(kernels)), std::move(labels), std::move(man), std::move(reports)};
}

Manifest save(const KernelSet& ks, const std::optional<ClusterLabels>& labels, const fs::path& dir,
              std::optional<int> k_true) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }
  Manifest man;
  man.n = static_cast<std::size_t>(ks.n());
  man.m = ks.m();
  man.trace_normalize = false;
  for (std::size_t p = 0; p < ks.m(); ++p) {
    KernelEntry e;
    e.name = ks[p].name().empty() ? "kernel_" + std::to_string(p) : ks[p].name();
    e.path = "kernel_" + std::to_string(p) + ".kmx";
    e.format = MatrixFormat::kmx;
    write_kmx(ks[p].values(), dir / e.path);
    man.kernels.push_back(std::move(e));
  }
  if (labels && !labels->labels.empty()) {
    if (labels->size() != man.n) {
      throw DimensionMismatchError("labels have " + std::to_string(labels->size()) + " entries, expected " +
                                   std::to_string(man.n));
    }
    man.labels_path = "labels.txt";
    write_labels(*labels, dir / *man.labels_path);
  }
  man.k_true = k_true;
  write_manifest(man, dir / "manifest.json");
  return man;
}

void SyntheticSpec::validate() const {
  if (n_per_cluster < 1 || k < 1 || dim < 1) {
    throw InputError("synthetic spec: n_per_cluster, k and dim must be >= 1");
  }
  if (k * n_per_cluster < 2) {
    throw InputError("synthetic spec: need at least two samples");
  }
  if (!(separation > 0.0)) {
    throw InputError("synthetic spec: separation must be > 0");
  }
  if (recipes.empty()) {
    throw InputError("synthetic spec: at least one informative kernel recipe is required");
  }
  for (const auto& r : recipes) {
    if (r.type == KernelType::rbf && !(r.sigma > 0.0)) {
      throw InputError("synthetic spec: rbf sigma must be > 0");
    }
    if (r.type == KernelType::polynomial && r.degree < 1) {
      throw InputError("synthetic spec: polynomial degree must be >= 1");
    }
  }
  if (noise_kernels < 0) {
    throw InputError("synthetic spec: noise_kernels must be >= 0");
  }
  if (noise_rank < 1) {
    throw InputError("synthetic spec: noise_rank must be >= 1");
  }
}

namespace {

// Portable draws: std::*_distribution output differs between standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Matrix build_kernel(const KernelRecipe& recipe, const Matrix& x) {
  const Eigen::Index n = x.rows();
  switch (recipe.type) {
    case KernelType::rbf: {
      const Vector sq = x.rowwise().squaredNorm();
      Matrix d2 = (-2.0 * x * x.transpose()).colwise() + sq;
      d2.rowwise() += sq.transpose();
      d2 = d2.cwiseMax(0.0);
      d2.diagonal().setZero();
      return (-d2 / (2.0 * recipe.sigma * recipe.sigma)).array().exp().matrix();
    }
    case KernelType::polynomial: {
      const Matrix g = x * x.transpose() / static_cast<double>(x.cols());
      return (g.array() + 1.0).pow(recipe.degree).matrix();
    }
    case KernelType::linear:
      return x * x.transpose();
    case KernelType::cosine: {
      Matrix xn = x;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = xn.row(i).norm();
        if (norm > 0.0) {
          xn.row(i) /= norm;
        }
      }
      Matrix k = xn * xn.transpose();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (xn.row(i).squaredNorm() > 0.0) {
          k(i, i) = 1.0;
        }
      }
      return k.cwiseMax(-1.0).cwiseMin(1.0);
    }
  }
  throw InputError("unknown kernel recipe");
}

}  // namespace

SyntheticData generate(const SyntheticSpec& spec) {
  spec.validate();
  Sampler sampler(spec.seed);
  const Eigen::Index n = static_cast<Eigen::Index>(spec.k) * spec.n_per_cluster;

  Matrix directions(spec.k, spec.dim);
  if (spec.k <= spec.dim) {
    directions.setZero();
    for (int c = 0; c < spec.k; ++c) {
      directions(c, c) = 1.0;
    }
  } else {
    for (int c = 0; c < spec.k; ++c) {
      for (int d = 0; d < spec.dim; ++d) {
        directions(c, d) = sampler.normal();
      }
      directions.row(c).normalize();
    }
  }

  Matrix x(n, spec.dim);
  ClusterLabels labels;
  labels.k = spec.k;
  labels.labels.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < spec.k; ++c) {
    for (int i = 0; i < spec.n_per_cluster; ++i) {
      const Eigen::Index row = static_cast<Eigen::Index>(c) * spec.n_per_cluster + i;
      for (int d = 0; d < spec.dim; ++d) {
        x(row, d) = spec.separation * directions(c, d) + sampler.normal();
      }
      labels.labels.push_back(c);
    }
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  std::vector<KernelMatrix> kernels;
  for (std::size_t r = 0; r < spec.recipes.size(); ++r) {
    const auto& recipe = spec.recipes[r];
    kernels.push_back(trace_normalize(
        KernelMatrix(build_kernel(recipe, x), to_string(recipe.type) + "_" + std::to_string(r))));
  }
  const int rank = spec.noise_rank;
  for (int q = 0; q < spec.noise_kernels; ++q) {
    Matrix a(rank, n);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        a(i, j) = sampler.normal();
      }
    }
    kernels.push_back(trace_normalize(KernelMatrix(a.transpose() * a, "noise_" + std::to_string(q))));
  }
  return SyntheticData{KernelSet(std::move(kernels)), std::move(labels)};
}

SyntheticSpec read_synthetic_spec(const fs::path& path) {
  auto in = open_in(path, "synthetic spec");
  SyntheticSpec spec;
  try {
    const json j = json::parse(in);
    spec.n_per_cluster = j.at("n_per_cluster").get<int>();
    spec.k = j.at("k").get<int>();
    spec.dim = j.at("dim").get<int>();
    spec.separation = j.at("separation").get<double>();
    for (const auto& r : j.at("kernels")) {
      KernelRecipe recipe;
      recipe.type = parse_kernel_type(r.at("type").get<std::string>());
      recipe.sigma = r.value("sigma", 1.0);
      recipe.degree = r.value("degree", 2);
      spec.recipes.push_back(recipe);
    }
    spec.noise_kernels = j.value("noise_kernels", 0);
    spec.noise_rank = j.value("noise_rank", 1);
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw FormatError("malformed synthetic spec " + path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

void write_synthetic_spec(const SyntheticSpec& spec, const fs::path& path) {
  json j;
  j["n_per_cluster"] = spec.n_per_cluster;
  j["k"] = spec.k;
  j["dim"] = spec.dim;
  j["separation"] = spec.separation;
  json recipes = json::array();
  for (const auto& r : spec.recipes) {
    json e{{"type", to_string(r.type)}};
    if (r.type == KernelType::rbf) {
      e["sigma"] = r.sigma;
    }
    if (r.type == KernelType::polynomial) {
      e["degree"] = r.degree;
    }
    recipes.push_back(std::move(e));
  }
  j["kernels"] = std::move(recipes);
  j["noise_kernels"] = spec.noise_kernels;
  j["noise_rank"] = spec.noise_rank;
  j["seed"] = spec.seed;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace mkc
