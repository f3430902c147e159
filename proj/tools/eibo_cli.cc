// Copyright 2026 The eibo Authors. All Rights Reserved.
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
// =============================================================================

// Command-line driver: single runs, seed sweeps, the verification suite and
// bound-diagnostic reports.
//
// Exit codes: 0 success, 1 failed verification or I/O error, 2 invalid
// configuration, 3 numerical failure during a run.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eibo/benchlab.h"
#include "eibo/engine.h"
#include "eibo/infogain.h"
#include "eibo/trace_io.h"
#include "eibo/verify.h"

namespace fs = std::filesystem;
using namespace eibo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int verbosity = 0;

void Log(const std::string& msg) {
  if (verbosity > 0) std::cerr << msg << '\n';
}

RunTrace Execute(const ExperimentConfig& cfg) {
  const Objective objective = cfg.MakeObjective();
  return cfg.policy == Policy::kAdaptive ? Run(objective, cfg.run, cfg.init)
                                           : RunBaselineUnconstrained(objective, cfg.run);
}

BoundDiagnostics Diagnose(const ExperimentConfig& cfg, const RunTrace& trace,
                          std::optional<double> rkhs_norm, double delta) {
  const double norm = rkhs_norm ? *rkhs_norm
                                : GridRkhsNorm(cfg.MakeObjective(), cfg.run.domain,
                                               cfg.run.kernel, trace.final_bounds.upper);
  return ComputeBoundDiagnostics(trace, norm, delta);
}

int CmdRun(const std::string& config_path, const fs::path& out,
           std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = LoadExperimentConfig(config_path);
  if (seed) cfg.run.seed = *seed;
  fs::create_directories(out);
  Log("running " + cfg.objective + " with seed " + std::to_string(cfg.run.seed));
  const RunTrace trace = Execute(cfg);
  WriteTraceCsv(trace, out / "trace.csv");
  WriteJson(ExperimentConfigToJson(cfg), out / "config.json");
  if (!trace.completed()) {
    WriteJson(nlohmann::json{{"completed", false}, {"abort_reason", *trace.abort_reason}},
              out / "diagnostics.json");
    std::cerr << "error: run aborted: " << *trace.abort_reason << '\n';
    return kExitNumerical;
  }
  const BoundDiagnostics diag = Diagnose(cfg, trace, std::nullopt, cfg.run.controller.delta);
  WriteJson(RunDiagnosticsToJson(trace, diag), out / "diagnostics.json");
  return kExitOk;
}

int CmdSweep(const std::string& config_path, const fs::path& out, int seeds) {
  if (seeds < 1) throw ConfigError("sweep: --seeds must be at least 1");
  const ExperimentConfig cfg = LoadExperimentConfig(config_path);
  std::vector<std::uint64_t> seed_list;
  for (int i = 0; i < seeds; ++i) seed_list.push_back(cfg.run.seed + static_cast<std::uint64_t>(i));
  SweepOptions options;
  options.threads = 0;
  options.keep_traces = true;
  Log("sweeping " + std::to_string(seeds) + " seeds on " +
      std::to_string(ThreadsFromEnvironment()) + " thread(s)");
  const SweepResult result =
      Sweep(cfg.policy, cfg.MakeObjective(), seed_list, cfg.run, cfg.init, options);

  fs::create_directories(out / "traces");
  for (const auto& trace : result.traces) {
    WriteTraceCsv(trace, out / "traces" / ("trace_seed_" + std::to_string(trace.config.seed) + ".csv"));
  }
  WriteJson(ExperimentConfigToJson(cfg), out / "config.json");
  WriteJson(SweepSummaryToJson(result.summary), out / "summary.json");
  std::ofstream seeds_csv(out / "seeds.csv", std::ios::binary);
  WriteSeedOutcomesCsv(result.summary, seeds_csv);
  std::cout << "policy=" << ToString(cfg.policy) << " seeds=" << result.summary.n_seeds
            << " success_rate=" << result.summary.success_rate
            << " failed=" << result.summary.failed_seeds.size() << '\n';
  return kExitOk;
}

int CmdVerify(const std::optional<fs::path>& out) {
  const auto results = verify::RunAll();
  verify::WriteReport(results, std::cout);
  if (out) {
    fs::create_directories(*out);
    std::ofstream txt(*out / "verify_report.txt", std::ios::binary);
    verify::WriteReport(results, txt);
    WriteJson(verify::ReportToJson(results), *out / "verify_report.json");
  }
  const bool all = std::all_of(results.begin(), results.end(),
                               [](const verify::CheckResult& r) { return r.passed; });
  return all ? kExitOk : kExitFailure;
}

std::vector<fs::path> FindTraces(const fs::path& in) {
  std::vector<fs::path> found;
  if (fs::exists(in / "trace.csv")) found.push_back(in / "trace.csv");
  if (fs::is_directory(in / "traces")) {
    for (const auto& entry : fs::directory_iterator(in / "traces")) {
      if (entry.path().extension() == ".csv") found.push_back(entry.path());
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

int CmdReport(const fs::path& in, const fs::path& out, std::optional<double> delta,
              std::optional<double> rkhs_norm) {
  const ExperimentConfig cfg = LoadExperimentConfig(in / "config.json");
  const double d = delta ? *delta : cfg.run.controller.delta;
  if (!(d > 0.0 && d < 1.0)) throw ConfigError("report: --delta must lie in (0, 1)");
  if (rkhs_norm && !(*rkhs_norm >= 0.0)) throw ConfigError("report: --rkhs-norm must be >= 0");
  const auto traces = FindTraces(in);
  if (traces.empty()) throw ConfigError("report: no trace CSV found under " + in.string());
  fs::create_directories(out);

  const int dim = cfg.run.domain.dim();
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& path : traces) {
    const RunTrace trace = TraceFromRows(cfg, ReadTraceCsv(path));
    if (trace.records.empty()) continue;
    const BoundDiagnostics diag = Diagnose(cfg, trace, rkhs_norm, d);
    const bool have_regret = std::all_of(trace.records.begin(), trace.records.end(),
                                         [](const IterationRecord& r) { return r.f_noiseless.has_value(); });
    std::optional<RegretSeries> regret;
    if (have_regret) {
      regret = ComputeRegretSeries(trace, cfg.MakeObjective().optimum.value());
    }

    const fs::path csv = out / ("bounds_" + path.stem().string() + ".csv");
    std::ofstream o(csv, std::ios::binary);
    o << "t,r_t,R_t,gamma_t,phi_t,beta_t,bound_curve,gamma_rate_se,gamma_rate_matern52\n";
    bool monotone = true;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      const int t = static_cast<int>(i) + 1;
      if (i > 0 && diag.bound_curve[i] < diag.bound_curve[i - 1]) monotone = false;
      o << t << ',' << (regret ? FormatDouble(regret->instantaneous[i]) : "nan") << ','
        << (regret ? FormatDouble(regret->cumulative[i]) : "nan") << ','
        << FormatDouble(diag.gamma[i]) << ',' << FormatDouble(diag.phi[i]) << ','
        << FormatDouble(diag.beta[i]) << ',' << FormatDouble(diag.bound_curve[i]) << ','
        << FormatDouble(GammaRate(KernelFamily::kSquaredExponential, dim, t)) << ','
        << FormatDouble(GammaRate(KernelFamily::kMatern52, dim, t)) << '\n';
    }
    summary.push_back({{"trace", path.filename().string()},
                       {"rounds", trace.records.size()},
                       {"C2", diag.c2},
                       {"rkhs_norm", diag.rkhs_norm},
                       {"beta_T", diag.beta_T},
                       {"info_gain_realized", diag.info_gain_realized},
                       {"bound_curve_T", diag.bound_curve.back()},
                       {"bound_curve_non_decreasing", monotone},
                       {"R_T", regret ? nlohmann::json(regret->cumulative.back())
                                      : nlohmann::json(nullptr)}});
    Log("report written for " + path.filename().string());
  }
  WriteJson(nlohmann::json{{"delta", d}, {"traces", summary}}, out / "report.json");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected-improvement Bayesian optimization with adaptive length-scale bounds"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", verbosity, "Progress messages on stderr");

  std::string config;
  std::string out_dir;
  std::string in_dir;
  std::optional<std::uint64_t> seed;
  int seeds = 0;
  std::optional<double> delta;
  std::optional<double> rkhs_norm;

  auto* run = app.add_subcommand("run", "Run one experiment and write its trace");
  run->add_option("--config", config, "Experiment config JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Run consecutive seeds and summarize");
  sweep->add_option("--config", config, "Experiment config JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--seeds", seeds, "Number of seeds, starting at the config seed")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle and invariant checks");
  verify_cmd->add_option("--out", out_dir, "Directory for the report files");

  auto* report = app.add_subcommand("report", "Bound diagnostics for existing traces");
  report->add_option("--in", in_dir, "Directory written by run or sweep")->required();
  report->add_option("--out", out_dir, "Output directory")->required();
  report->add_option("--delta", delta, "Confidence parameter (default: config delta)");
  report->add_option("--rkhs-norm", rkhs_norm, "RKHS norm of the objective (default: grid estimate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return CmdRun(config, out_dir, seed);
    if (*sweep) return CmdSweep(config, out_dir, seeds);
    if (*verify_cmd) {
      return CmdVerify(out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir));
    }
    if (*report) return CmdReport(in_dir, out_dir, delta, rkhs_norm);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
