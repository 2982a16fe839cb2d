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

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

namespace mkc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NamedAlgorithm {
  const char* name;
  Algorithm algo;
};

constexpr NamedAlgorithm kAlgorithms[] = {
    {"simplemkkm", Algorithm::simplemkkm}, {"kamm-r", Algorithm::kamm_r},   {"kamm-a", Algorithm::kamm_a},
    {"mkkm", Algorithm::mkkm},             {"mkkm-mm", Algorithm::mkkm_mm}, {"avg-kkm", Algorithm::avg_kkm},
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

json metrics_json(const MetricTriple& t) { return {{"acc", t.acc}, {"nmi", t.nmi}, {"purity", t.purity}}; }

json mean_std_json(const MeanStd& ms) { return {{"mean", ms.mean}, {"std", ms.std}}; }

json gamma_json(const Vector& g) { return json(std::vector<double>(g.data(), g.data() + g.size())); }

int resolve_k(const RunConfig& config, const Dataset& data) {
  if (config.k > 0) {
    return config.k;
  }
  if (data.k_true) {
    return *data.k_true;
  }
  if (data.truth) {
    return data.truth->k;
  }
  throw UsageError("--k is required when the data source does not declare k_true");
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& a : kAlgorithms) {
    if (name == a.name) {
      return a.algo;
    }
  }
  throw UsageError("unknown algorithm '" + name + "'");
}

std::string algorithm_name(Algorithm algo) {
  for (const auto& a : kAlgorithms) {
    if (a.algo == algo) {
      return a.name;
    }
  }
  return "unknown";
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& a : kAlgorithms) {
      v.emplace_back(a.name);
    }
    return v;
  }();
  return names;
}

void RunConfig::validate() const {
  if (restarts < 1) {
    throw UsageError("--restarts must be >= 1");
  }
  if (k < 0) {
    throw UsageError("--k must be >= 1");
  }
  if (!(tol > 0.0)) {
    throw UsageError("--tol must be > 0");
  }
  if (max_iter < 1) {
    throw UsageError("--max-iter must be >= 1");
  }
  if (jobs < 1) {
    throw UsageError("--jobs must be >= 1");
  }
}

Dataset load_dataset(const DataSource& source) {
  if (source.manifest.has_value() == source.spec.has_value()) {
    throw UsageError("exactly one of --manifest or --spec is required");
  }
  if (source.manifest) {
    LoadedData loaded = load(*source.manifest);
    return Dataset{std::move(loaded.kernels), std::move(loaded.labels), loaded.manifest.k_true};
  }
  const SyntheticSpec spec = read_synthetic_spec(*source.spec);
  SyntheticData data = generate(spec);
  return Dataset{std::move(data.kernels), std::move(data.labels), spec.k};
}

SolveResult run_algorithm(Algorithm algo, const KernelSet& ks, int k, const SolverOptions& opts,
                          std::uint64_t seed) {
  switch (algo) {
    case Algorithm::simplemkkm:
      return solve(ks, k, opts, seed);
    case Algorithm::kamm_r:
      return solve_kamm_r(ks, k, opts, seed);
    case Algorithm::kamm_a:
      return kamm_a(ks, k, opts, seed).first;
    case Algorithm::mkkm:
      return mkkm(ks, k, opts, seed).first;
    case Algorithm::mkkm_mm:
      return mkkm_mm(ks, k, opts, seed).first;
    case Algorithm::avg_kkm:
      return avg_kkm(ks, k, seed, opts.rounding_restarts);
  }
  throw UsageError("unknown algorithm");
}

RunSummary execute(const RunConfig& config, const Dataset& data) {
  config.validate();
  const int k = resolve_k(config, data);
  SolverOptions opts;
  opts.tol = config.tol;
  opts.max_iter = config.max_iter;

  std::vector<std::optional<RestartOutcome>> slots(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int i = next++; i < config.restarts; i = next++) {
      try {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult res = run_algorithm(config.algorithm, data.kernels, k, opts, seed);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::optional<MetricTriple> metrics;
        if (data.truth) {
          metrics = evaluate(res.labels, *data.truth);
        }
        slots[static_cast<std::size_t>(i)] = RestartOutcome{i, seed, std::move(res), metrics, secs};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = config.restarts;
      }
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  const int threads = std::min(config.jobs, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  RunSummary summary;
  summary.k = k;
  summary.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<MetricTriple> triples;
  for (auto& slot : slots) {
    if (slot->metrics) {
      triples.push_back(*slot->metrics);
    }
    summary.restarts.push_back(std::move(*slot));
  }
  if (!triples.empty()) {
    summary.aggregate = aggregate(triples);
  }
  return summary;
}

void write_run_outputs(const RunConfig& config, const Dataset& data, const RunSummary& summary) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
  }
  const std::size_t m = data.kernels.m();

  json runs = json::array();
  for (const auto& r : summary.restarts) {
    runs.push_back({{"restart", r.restart},
                    {"seed", r.seed},
                    {"objective", r.result.objective},
                    {"iterations", r.result.iterations()},
                    {"converged", r.result.converged},
                    {"weight_domain", r.result.domain == WeightDomain::simplex ? "simplex" : "ball"},
                    {"gamma", gamma_json(r.result.gamma)},
                    {"metrics", r.metrics ? metrics_json(*r.metrics) : json(nullptr)}});
  }
  json results{{"algorithm", algorithm_name(config.algorithm)},
               {"k", summary.k},
               {"n", data.kernels.n()},
               {"m", m},
               {"restarts", config.restarts},
               {"base_seed", config.seed},
               {"tol", config.tol},
               {"max_iter", config.max_iter},
               {"runs", std::move(runs)}};
  if (summary.aggregate) {
    results["aggregate"] = {{"acc", mean_std_json(summary.aggregate->acc)},
                            {"nmi", mean_std_json(summary.aggregate->nmi)},
                            {"purity", mean_std_json(summary.aggregate->purity)},
                            {"count", summary.aggregate->count}};
  } else {
    results["aggregate"] = nullptr;
  }
  open_out(config.out_dir / "results.json") << results.dump(2) << '\n';

  {
    auto out = open_out(config.out_dir / "results.csv");
    out << "restart,seed,objective,iterations,converged,acc,nmi,purity\n";
    for (const auto& r : summary.restarts) {
      out << r.restart << ',' << r.seed << ',' << format_double(r.result.objective) << ','
          << r.result.iterations() << ',' << (r.result.converged ? 1 : 0);
      if (r.metrics) {
        out << ',' << format_double(r.metrics->acc) << ',' << format_double(r.metrics->nmi) << ','
            << format_double(r.metrics->purity);
      } else {
        out << ",,,";
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(config.out_dir / "aggregate.csv");
    out << "metric,mean,std,count\n";
    if (summary.aggregate) {
      const auto& a = *summary.aggregate;
      for (const auto& [name, ms] : {std::pair{"acc", a.acc}, std::pair{"nmi", a.nmi}, std::pair{"purity", a.purity}}) {
        out << name << ',' << format_double(ms.mean) << ',' << format_double(ms.std) << ',' << a.count << '\n';
      }
    }
  }
  {
    auto out = open_out(config.out_dir / "weights.csv");
    out << "restart";
    for (std::size_t p = 0; p < m; ++p) {
      out << ",gamma_" << p;
    }
    out << '\n';
    for (const auto& r : summary.restarts) {
      out << r.restart;
      for (Eigen::Index p = 0; p < r.result.gamma.size(); ++p) {
        out << ',' << format_double(r.result.gamma[p]);
      }
      out << '\n';
    }
  }
  if (config.write_trace) {
    auto out = open_out(config.out_dir / "trace.csv");
    out << "restart,iter,objective,alpha";
    for (std::size_t p = 0; p < m; ++p) {
      out << ",gamma_" << p;
    }
    out << ",eigen_gap\n";
    for (const auto& r : summary.restarts) {
      for (const auto& e : r.result.trace.iterations) {
        out << r.restart << ',' << e.iter << ',' << format_double(e.objective) << ',' << format_double(e.alpha);
        for (Eigen::Index p = 0; p < e.gamma.size(); ++p) {
          out << ',' << format_double(e.gamma[p]);
        }
        out << ',' << format_double(e.eigen_gap) << '\n';
      }
    }
  }
  {
    json timing{{"total_seconds", summary.total_seconds}};
    std::vector<double> secs;
    for (const auto& r : summary.restarts) {
      secs.push_back(r.seconds);
    }
    timing["restart_seconds"] = secs;
    open_out(config.out_dir / "timing.json") << timing.dump(2) << '\n';
  }
}

int cmd_run(const RunConfig& config, const DataSource& source, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const Dataset data = load_dataset(source);
    const RunSummary summary = execute(config, data);
    write_run_outputs(config, data, summary);
    out << algorithm_name(config.algorithm) << ": " << summary.restarts.size() << " restarts, k = " << summary.k
        << ", n = " << data.kernels.n() << ", m = " << data.kernels.m() << '\n';
    if (summary.aggregate) {
      const auto& a = *summary.aggregate;
      out << "  ACC    " << fmt("%.4f +/- %.4f", a.acc.mean, a.acc.std) << '\n'
          << "  NMI    " << fmt("%.4f +/- %.4f", a.nmi.mean, a.nmi.std) << '\n'
          << "  purity " << fmt("%.4f +/- %.4f", a.purity.mean, a.purity.std) << '\n';
    }
    out << "  outputs written to " << config.out_dir.string() << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_bench(const RunConfig& base, const std::vector<std::string>& algorithms, const DataSource& source,
              std::ostream& out, std::ostream& err) {
  try {
    if (algorithms.empty()) {
      throw UsageError("bench needs at least one algorithm");
    }
    std::vector<Algorithm> algos;
    for (const auto& name : algorithms) {
      algos.push_back(parse_algorithm(name));
    }
    base.validate();
    const Dataset data = load_dataset(source);
    if (!data.truth) {
      throw Error("bench requires ground-truth labels");
    }

    struct Row {
      std::string name;
      AggregateReport report;
      double seconds_mean = 0.0;
      double seconds_total = 0.0;
    };
    std::vector<Row> rows;
    for (Algorithm algo : algos) {
      RunConfig cfg = base;
      cfg.algorithm = algo;
      const RunSummary summary = execute(cfg, data);
      double solver_secs = 0.0;
      for (const auto& r : summary.restarts) {
        solver_secs += r.seconds;
      }
      rows.push_back(Row{algorithm_name(algo), *summary.aggregate,
                         solver_secs / static_cast<double>(summary.restarts.size()), solver_secs});
    }

    std::error_code ec;
    fs::create_directories(base.out_dir, ec);
    if (ec) {
      throw IoError("cannot create output directory " + base.out_dir.string());
    }
    {
      auto csv = open_out(base.out_dir / "bench.csv");
      csv << "algorithm,acc_mean,acc_std,nmi_mean,nmi_std,purity_mean,purity_std,seconds_mean,seconds_total,"
             "restarts\n";
      for (const auto& r : rows) {
        csv << r.name << ',' << format_double(r.report.acc.mean) << ',' << format_double(r.report.acc.std) << ','
            << format_double(r.report.nmi.mean) << ',' << format_double(r.report.nmi.std) << ','
            << format_double(r.report.purity.mean) << ',' << format_double(r.report.purity.std) << ','
            << format_double(r.seconds_mean) << ',' << format_double(r.seconds_total) << ',' << r.report.count
            << '\n';
      }
    }
    std::string table;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %-16s %-16s %-16s %10s\n", "algorithm", "ACC (%)", "NMI (%)",
                  "purity (%)", "seconds");
    table += line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof(line), "%-12s %-16s %-16s %-16s %10.3f\n", r.name.c_str(),
                    fmt("%.1f +/- %.1f", 100 * r.report.acc.mean, 100 * r.report.acc.std).c_str(),
                    fmt("%.1f +/- %.1f", 100 * r.report.nmi.mean, 100 * r.report.nmi.std).c_str(),
                    fmt("%.1f +/- %.1f", 100 * r.report.purity.mean, 100 * r.report.purity.std).c_str(),
                    r.seconds_mean);
      table += line;
    }
    open_out(base.out_dir / "bench.txt") << table;
    out << table;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_gen(const fs::path& spec_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  SyntheticSpec spec;
  try {
    spec = read_synthetic_spec(spec_path);
  } catch (const std::exception& e) {
    err << "usage error: bad synthetic spec: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const SyntheticData data = generate(spec);
    const Manifest man = save(data.kernels, data.labels, out_dir, spec.k);
    out << "wrote " << man.m << " kernels (n = " << man.n << ") to " << (out_dir / "manifest.json").string()
        << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_inspect(const fs::path& manifest, std::ostream& out, std::ostream& err) {
  try {
    const LoadedData data = load(manifest);
    out << "n: " << data.kernels.n() << '\n' << "m: " << data.kernels.m() << '\n';
    for (std::size_t p = 0; p < data.kernels.m(); ++p) {
      const auto& km = data.kernels[p];
      const auto& rep = data.reports[p];
      Eigen::SelfAdjointEigenSolver<Matrix> eig(km.values(), Eigen::EigenvaluesOnly);
      const Vector& ev = eig.eigenvalues();
      const double top = std::max(std::abs(ev.maxCoeff()), 1e-300);
      long rank = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > 1e-10 * top) {
          ++rank;
        }
      }
      const bool psd = ev.minCoeff() >= -kPsdRelativeTolerance * top;
      out << "kernel " << p << " '" << km.name() << "': trace " << format_double(km.trace()) << ", rank ~" << rank
          << ", PSD " << (psd ? "ok" : "no") << " (min eig " << format_double(ev.minCoeff()) << ")";
      if (rep.symmetrized) {
        out << "; warning: symmetrized (max asymmetry " << format_double(rep.max_asymmetry) << ")";
      }
      if (rep.psd_repaired) {
        out << "; warning: PSD-repaired (" << rep.clipped_eigenvalues << " eigenvalues clipped)";
      }
      out << '\n';
    }
    if (data.labels) {
      std::vector<int> ids = data.labels->labels;
      std::sort(ids.begin(), ids.end());
      out << "labels: " << data.labels->size() << " samples, " << data.labels->k << " classes (";
      bool first = true;
      for (auto it = ids.begin(); it != ids.end();) {
        const auto end = std::upper_bound(it, ids.end(), *it);
        out << (first ? "" : ", ") << *it << ": " << (end - it);
        first = false;
        it = end;
      }
      out << ")\n";
    } else {
      out << "labels: none\n";
    }
    if (data.manifest.k_true) {
      out << "k_true: " << *data.manifest.k_true << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace mkc::cli
