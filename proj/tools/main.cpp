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

#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using mkc::cli::DataSource;
using mkc::cli::RunConfig;

struct CommonFlags {
  std::string manifest;
  std::string spec;
  std::string algo = "simplemkkm";
  RunConfig config;
  std::string out = "mkc_out";
  bool no_trace = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  auto* man = sub->add_option("--manifest", f.manifest, "Kernel-set manifest (JSON)");
  auto* spec = sub->add_option("--spec", f.spec, "Synthetic dataset spec (JSON), generated in memory");
  man->excludes(spec);
  sub->add_option("--k", f.config.k, "Number of clusters (default: k_true of the data source)");
  sub->add_option("--restarts", f.config.restarts, "Restarts with seeds seed+i")->capture_default_str();
  sub->add_option("--seed", f.config.seed, "Base seed")->capture_default_str();
  sub->add_option("--tol", f.config.tol, "Stop when max |gamma change| <= tol")->capture_default_str();
  sub->add_option("--max-iter", f.config.max_iter, "Outer-iteration cap")->capture_default_str();
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_flag("--no-trace", f.no_trace, "Skip trace.csv");
  sub->add_option("--jobs", f.config.jobs, "Concurrent restarts")->capture_default_str();
}

DataSource source_of(const CommonFlags& f) {
  DataSource src;
  if (!f.manifest.empty()) {
    src.manifest = f.manifest;
  }
  if (!f.spec.empty()) {
    src.spec = f.spec;
  }
  return src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mkc: multiple kernel clustering (SimpleMKKM and baselines)"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one algorithm with restarts and write results");
  add_common(run, run_flags);
  run->add_option("--algo", run_flags.algo, "simplemkkm | kamm-r | kamm-a | mkkm | mkkm-mm | avg-kkm")
      ->capture_default_str();

  CommonFlags bench_flags;
  std::vector<std::string> bench_algos;
  auto* bench = app.add_subcommand("bench", "Compare algorithms on one dataset (mean +/- std table)");
  add_common(bench, bench_flags);
  bench->add_option("--algo", bench_algos, "Algorithm(s) to compare; repeat or comma-separate")->delimiter(',');

  std::string gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Materialize a synthetic spec as a manifest directory");
  gen->add_option("--spec", gen_spec, "Synthetic dataset spec (JSON)")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();

  std::string inspect_manifest;
  auto* inspect = app.add_subcommand("inspect", "Summarize a kernel-set manifest");
  inspect->add_option("--manifest", inspect_manifest, "Kernel-set manifest (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mkc::cli::kExitUsage;
  }

  if (run->parsed()) {
    RunConfig cfg = run_flags.config;
    try {
      cfg.algorithm = mkc::cli::parse_algorithm(run_flags.algo);
    } catch (const mkc::cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return mkc::cli::kExitUsage;
    }
    cfg.out_dir = run_flags.out;
    cfg.write_trace = !run_flags.no_trace;
    return mkc::cli::cmd_run(cfg, source_of(run_flags), std::cout, std::cerr);
  }
  if (bench->parsed()) {
    RunConfig cfg = bench_flags.config;
    cfg.out_dir = bench_flags.out;
    cfg.write_trace = !bench_flags.no_trace;
    return mkc::cli::cmd_bench(cfg, bench_algos, source_of(bench_flags), std::cout, std::cerr);
  }
  if (gen->parsed()) {
    return mkc::cli::cmd_gen(gen_spec, gen_out, std::cout, std::cerr);
  }
  if (inspect->parsed()) {
    return mkc::cli::cmd_inspect(inspect_manifest, std::cout, std::cerr);
  }
  return mkc::cli::kExitUsage;
}
