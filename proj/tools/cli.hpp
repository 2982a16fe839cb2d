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

#include "mkc/mkc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mkc::cli {

enum class Algorithm { simplemkkm, kamm_r, kamm_a, mkkm, mkkm_mm, avg_kkm };

/// Raised for bad flags or names; mapped to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

[[nodiscard]] Algorithm parse_algorithm(const std::string& name);
[[nodiscard]] std::string algorithm_name(Algorithm algo);
[[nodiscard]] const std::vector<std::string>& algorithm_names();

struct RunConfig {
  Algorithm algorithm = Algorithm::simplemkkm;
  int k = 0;  ///< 0: take k_true from the manifest or synthetic spec
  int restarts = 50;
  std::uint64_t seed = 0;
  double tol = 1e-4;
  int max_iter = 100;
  std::filesystem::path out_dir = "mkc_out";
  bool write_trace = true;
  int jobs = 1;

  void validate() const;
};

/// Where the kernels come from: a manifest on disk or a synthetic spec generated in memory.
struct DataSource {
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> spec;
};

struct Dataset {
  KernelSet kernels;
  std::optional<ClusterLabels> truth;
  std::optional<int> k_true;
};

[[nodiscard]] Dataset load_dataset(const DataSource& source);

/// Dispatches to the requested solver with restart seed `seed`.
[[nodiscard]] SolveResult run_algorithm(Algorithm algo, const KernelSet& ks, int k, const SolverOptions& opts,
                                        std::uint64_t seed);

struct RestartOutcome {
  int restart = 0;
  std::uint64_t seed = 0;
  SolveResult result;
  std::optional<MetricTriple> metrics;
  double seconds = 0.0;  ///< solver wall-clock only
};

struct RunSummary {
  std::vector<RestartOutcome> restarts;
  std::optional<AggregateReport> aggregate;
  int k = 0;
  double total_seconds = 0.0;
};

/// Runs `config.restarts` restarts with seeds seed + i. Restarts run on up to
/// `config.jobs` threads; results are ordered by restart index.
[[nodiscard]] RunSummary execute(const RunConfig& config, const Dataset& data);

/// Writes results.json, results.csv, aggregate.csv, weights.csv, trace.csv
/// (unless disabled) and timing.json under config.out_dir.
void write_run_outputs(const RunConfig& config, const Dataset& data, const RunSummary& summary);

int cmd_run(const RunConfig& config, const DataSource& source, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& base, const std::vector<std::string>& algorithms, const DataSource& source,
              std::ostream& out, std::ostream& err);
int cmd_gen(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);
int cmd_inspect(const std::filesystem::path& manifest, std::ostream& out, std::ostream& err);

}  // namespace mkc::cli
