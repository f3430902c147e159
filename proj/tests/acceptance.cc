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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.
//
// Usage: eibo_acceptance <path to eibo CLI> <scratch directory>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "eibo/benchlab.h"
#include "eibo/trace_io.h"
#include "eibo/verify.h"

namespace fs = std::filesystem;
using namespace eibo;

namespace {

struct Line {
  int id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;
};

std::vector<Line> lines;

template <typename F>
void Criterion(int id, const std::string& title, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool passed = false;
  try {
    passed = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  lines.push_back({id, title, passed, detail, secs});
  std::printf("%s criterion %2d  %-40s %7.1fs  %s\n", passed ? "PASS" : "FAIL", id, title.c_str(),
              secs, detail.c_str());
  std::fflush(stdout);
}

std::string Describe(const verify::CheckResult& r) {
  std::ostringstream s;
  s << r.name << " error=" << r.error << " tol=" << r.tolerance;
  return s.str();
}

bool Within(const verify::CheckResult& r, double seconds_limit, double elapsed,
            std::string& detail) {
  detail = Describe(r);
  if (elapsed > seconds_limit) {
    detail += " (over the time limit)";
    return false;
  }
  return r.passed;
}

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: eibo_acceptance <eibo cli> <scratch dir>\n";
    return 2;
  }
  const fs::path cli = argv[1];
  const fs::path scratch = argv[2];

  Criterion(1, "GP oracle equivalence", [](std::string& d) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify::GpOracleEquivalence(100, 2);
    return Within(r, 10.0, SecondsSince(t0), d);
  });

  Criterion(2, "EI Monte-Carlo agreement", [](std::string& d) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify::EiMonteCarloAgreement(50, 1'000'000, 3);
    return Within(r, 30.0, SecondsSince(t0), d);
  });

  Criterion(3, "Info-gain chain rule identity", [](std::string& d) {
    const auto r = verify::InfoGainIdentity(100, 5);
    d = Describe(r);
    return r.passed;
  });

  Criterion(4, "Info gain vs length scale", [](std::string& d) {
    const auto r = verify::InfoGainMonotone(100, 6);
    d = Describe(r);
    return r.passed;
  });

  // Shared runs for criteria 5, 8, 10 and 11.
  const ExperimentConfig trap = TrapExperiment();
  std::vector<std::uint64_t> seeds(50);
  std::iota(seeds.begin(), seeds.end(), 0);
  SweepOptions options;
  options.threads = 0;
  options.keep_traces = true;
  const auto sweep_start = std::chrono::steady_clock::now();
  const SweepResult adaptive =
      Sweep(Policy::kAdaptive, trap.MakeObjective(), seeds, trap.run, trap.init, options);
  const double adaptive_secs = SecondsSince(sweep_start);
  RunConfig baseline_cfg = trap.run;
  Box early;
  early.lower = Eigen::VectorXd::Constant(1, 0.0);
  early.upper = Eigen::VectorXd::Constant(1, 0.3);
  baseline_cfg.initial_box = early;
  const SweepResult baseline =
      Sweep(Policy::kBaselineML, trap.MakeObjective(), seeds, baseline_cfg, trap.init, options);
  const double sweep_secs = SecondsSince(sweep_start);
  const std::vector<RunTrace> reference = verify::ReferenceRuns();

  Criterion(5, "Variance-sum bound on every run", [&](std::string& d) {
    std::vector<RunTrace> all = adaptive.traces;
    all.insert(all.end(), baseline.traces.begin(), baseline.traces.end());
    all.insert(all.end(), reference.begin(), reference.end());
    int incomplete = 0;
    for (const auto& t : all) incomplete += t.completed() ? 0 : 1;
    const auto r = verify::VarianceSumBound(all);
    d = Describe(r) + " over " + std::to_string(all.size()) + " runs";
    return r.passed && incomplete == 0;
  });

  Criterion(6, "RKHS norm scaling", [](std::string& d) {
    const auto r = verify::NormScaling(100, 7);
    d = Describe(r);
    return r.passed;
  });

  Criterion(7, "tau and EI sandwich suite", [](std::string& d) {
    const std::vector<verify::CheckResult> rs{verify::TauReflection(), verify::TauMonotone(),
                                              verify::TauLinearBound(), verify::TauTailAccuracy(),
                                              verify::EiSandwich(1000, 4)};
    bool ok = true;
    for (const auto& r : rs) {
      ok = ok && r.passed;
      if (!r.passed) d += Describe(r) + "; ";
    }
    if (ok) d = "5 checks";
    return ok;
  });

  Criterion(8, "Mean-gap bound on 50 trap runs", [&](std::string& d) {
    const auto r = verify::MeanGapBound(adaptive.traces);
    d = Describe(r) + " time=" + std::to_string(static_cast<int>(adaptive_secs)) + "s";
    return r.passed && adaptive_secs < 300.0;
  });

  Criterion(9, "Controller logic", [&](std::string& d) {
    const auto shrink = verify::ShrinkRuleExamples();
    const auto counter = verify::CounterContract();
    std::vector<RunTrace> runs = adaptive.traces;
    runs.insert(runs.end(), reference.begin(), reference.end());
    const auto state = verify::HyperStateInvariants(runs);
    d = Describe(shrink) + "; " + Describe(counter) + "; " + Describe(state);
    return shrink.passed && counter.passed && state.passed;
  });

  Criterion(10, "Trap: adaptive succeeds, baseline fails", [&](std::string& d) {
    const double fail_rate =
        static_cast<double>(std::count_if(baseline.summary.outcomes.begin(),
                                          baseline.summary.outcomes.end(),
                                          [](const SeedOutcome& o) { return !o.failed && !o.success; })) /
        baseline.summary.n_seeds;
    std::ostringstream s;
    s << "adaptive success=" << adaptive.summary.success_rate << " (need >= 0.70), baseline failure="
      << fail_rate << " (need >= 0.30), errors=" << adaptive.summary.failed_seeds.size() << "+"
      << baseline.summary.failed_seeds.size() << ", time=" << static_cast<int>(sweep_secs) << "s";
    d = s.str();
    return adaptive.summary.success_rate >= 0.70 && fail_rate >= 0.30 &&
           adaptive.summary.failed_seeds.empty() && sweep_secs < 600.0;
  });

  Criterion(11, "Average regret shrinks", [&](std::string& d) {
    int better = 0;
    for (const auto& o : adaptive.summary.outcomes) {
      if (!o.failed && o.regret_rate < o.regret_rate_at_10) ++better;
    }
    const double frac = static_cast<double>(better) / adaptive.summary.n_seeds;
    d = "R_60/60 < R_10/10 in " + std::to_string(better) + "/50 seeds (need >= 60%)";
    return frac >= 0.60;
  });

  Criterion(12, "Sub-Gaussian tails", [](std::string& d) {
    const auto r = verify::SubGaussianTails(1'000'000, 8);
    d = Describe(r);
    return r.passed;
  });

  Criterion(13, "CLI run determinism", [&](std::string& d) {
    const fs::path cfg = scratch / "determinism_config.json";
    fs::create_directories(scratch);
    WriteJson(ExperimentConfigToJson(trap), cfg);
    std::string codes;
    for (const char* run : {"a", "b"}) {
      const std::string cmd = "\"" + cli.string() + "\" run --config \"" + cfg.string() +
                              "\" --out \"" + (scratch / run).string() + "\" --seed 17";
      codes += std::to_string(std::system(cmd.c_str())) + " ";
    }
    const std::string a = ReadFile(scratch / "a" / "trace.csv");
    const std::string b = ReadFile(scratch / "b" / "trace.csv");
    const long rows = std::count(a.begin(), a.end(), '\n') - 1;
    d = "exit codes " + codes + "rows=" + std::to_string(rows) +
        (a == b ? " identical" : " DIFFERENT");
    return codes == "0 0 " && !a.empty() && a == b && rows == trap.run.horizon;
  });

  const long passed = std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.passed; });
  std::printf("%ld/%zu criteria passed\n", passed, lines.size());
  return passed == static_cast<long>(lines.size()) ? 0 : 1;
}
