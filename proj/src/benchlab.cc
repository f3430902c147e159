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

#include "eibo/benchlab.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "eibo/kernel.h"

namespace eibo {

std::string_view ToString(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kSymmetricBernoulli:
      return "bernoulli";
    case NoiseFamily::kUniform:
      return "uniform";
  }
  return "unknown";
}

NoiseFamily ParseNoiseFamily(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "bernoulli") return NoiseFamily::kSymmetricBernoulli;
  if (name == "uniform") return NoiseFamily::kUniform;
  throw std::invalid_argument("unknown noise family '" + std::string(name) +
                              "' (expected gaussian, bernoulli or uniform)");
}

double SampleNoise(const NoiseSpec& spec, Rng& rng) {
  switch (spec.family) {
    case NoiseFamily::kGaussian:
      return std::normal_distribution<double>(0.0, spec.scale)(rng);
    case NoiseFamily::kSymmetricBernoulli:
      return (rng() & 1U) ? spec.scale : -spec.scale;
    case NoiseFamily::kUniform: {
      const double half = spec.scale * std::sqrt(3.0);
      return std::uniform_real_distribution<double>(-half, half)(rng);
    }
  }
  return 0.0;
}

namespace {

double Se1d(double center, double x, double lengthscale) {
  const double r = (x - center) / lengthscale;
  return std::exp(-0.5 * r * r);
}

}  // namespace

double TrapObjective::Noiseless(double x) const {
  return amplitude_wide * Se1d(center_wide, x, lengthscale_wide) +
         amplitude_narrow * Se1d(center_narrow, x, lengthscale_narrow);
}

double TrapObjective::Eval(double x, bool noisy, Rng* rng) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("trap objective: x=" + std::to_string(x) +
                                " lies outside [0, 1]");
  }
  const double f = Noiseless(x);
  if (!noisy) return f;
  if (rng == nullptr) throw std::invalid_argument("trap objective: noisy draw needs an rng");
  return f + SampleNoise(noise, *rng);
}

Objective TrapObjective::AsObjective() const {
  Objective obj;
  obj.name = "trap";
  obj.optimum = OptimumValue();
  obj.evaluate = [trap = *this](const Eigen::VectorXd& x, Rng& rng) {
    if (x.size() != 1) throw std::invalid_argument("trap objective is one-dimensional");
    const double f = trap.Eval(x[0], false, nullptr);
    return Observation{trap.Eval(x[0], true, &rng), f};
  };
  return obj;
}

double WidePeakObjective::Noiseless(double x) const {
  return amplitude * Se1d(center, x, lengthscale);
}

Objective WidePeakObjective::AsObjective() const {
  Objective obj;
  obj.name = "wide_peak";
  obj.optimum = amplitude;
  obj.evaluate = [peak = *this](const Eigen::VectorXd& x, Rng& rng) {
    if (x.size() != 1) throw std::invalid_argument("wide_peak objective is one-dimensional");
    if (!(x[0] >= 0.0 && x[0] <= 1.0)) {
      throw std::invalid_argument("wide_peak objective: x outside [0, 1]");
    }
    const double f = peak.Noiseless(x[0]);
    return Observation{f + SampleNoise(peak.noise, rng), f};
  };
  return obj;
}

Objective MakeObjective(std::string_view name, const NoiseSpec& noise) {
  if (name == "trap") {
    TrapObjective trap;
    trap.noise = noise;
    return trap.AsObjective();
  }
  if (name == "wide_peak") {
    WidePeakObjective peak;
    peak.noise = noise;
    return peak.AsObjective();
  }
  throw std::invalid_argument("unknown objective '" + std::string(name) +
                              "' (expected trap or wide_peak)");
}

double GridRkhsNorm(const Objective& objective, const Box& domain,
                    KernelFamily family, const LengthScales& theta) {
  constexpr int kPoints = 64;
  CandidateSpec grid;
  grid.grid_points_1d = kPoints;
  grid.lowdiscrepancy_points = kPoints;
  const Eigen::MatrixXd x = MakeCandidates(domain, grid);
  Eigen::VectorXd f(x.rows());
  Rng rng(0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Observation obs = objective.evaluate(x.row(i).transpose(), rng);
    if (!obs.f_noiseless) {
      throw std::invalid_argument("rkhs norm: objective '" + objective.name +
                                  "' has no noiseless values");
    }
    f[i] = *obs.f_noiseless;
  }
  return RkhsNormProxy(KernelSpec{family, theta}, x, f);
}

RunTrace RunBaselineUnconstrained(const Objective& objective, const RunConfig& cfg) {
  const int d = cfg.domain.dim();
  HyperBounds bounds{LengthScales::Constant(d, kBaselineThetaLower),
                     LengthScales::Constant(d, kBaselineThetaUpper)};
  const HyperInit init{bounds, bounds.GeometricMidpoint()};
  return RunWithPolicy(objective, cfg, init, Policy::kBaselineML);
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - lo;
  return values[lo] * (1.0 - w) + values[hi] * w;
}

int ThreadsFromEnvironment() {
  if (const char* env = std::getenv("EIBO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

SeedOutcome SummarizeRun(const RunTrace& trace, double threshold) {
  SeedOutcome out;
  out.seed = trace.config.seed;
  out.shrink_events = trace.shrink_events;
  out.mean_gap_violations = trace.mean_gap_violations;
  out.variance_sum_holds = trace.variance_sum_realized.holds() && trace.variance_sum_theta_lower.holds();
  if (!trace.completed()) {
    out.failed = true;
    out.error = *trace.abort_reason;
  }
  out.best_f = trace.BestNoiselessValue().value_or(std::numeric_limits<double>::quiet_NaN());
  out.success = !out.failed && out.best_f >= threshold;
  if (!trace.records.empty() && trace.records.back().cumulative_regret) {
    const double horizon = static_cast<double>(trace.records.size());
    out.cumulative_regret = *trace.records.back().cumulative_regret;
    out.regret_rate = out.cumulative_regret / horizon;
    out.regret_rate_at_10 = trace.records.size() >= 10
                                ? *trace.records[9].cumulative_regret / 10.0
                                : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

SweepSummary Aggregate(Policy policy, std::vector<SeedOutcome> outcomes,
                       double threshold) {
  SweepSummary s;
  s.policy = policy;
  s.threshold = threshold;
  s.n_seeds = static_cast<int>(outcomes.size());
  std::vector<double> totals, rates;
  int successes = 0;
  for (const auto& o : outcomes) {
    if (o.failed) {
      s.failed_seeds.push_back(o.seed);
      continue;
    }
    if (o.success) ++successes;
    totals.push_back(o.cumulative_regret);
    rates.push_back(o.regret_rate);
  }
  s.success_rate = s.n_seeds > 0 ? static_cast<double>(successes) / s.n_seeds : 0.0;
  s.median_RT = Quantile(totals, 0.5);
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    s.quantiles_RT_over_T.emplace_back(q, Quantile(rates, q));
  }
  s.outcomes = std::move(outcomes);
  return s;
}

SweepResult Sweep(Policy policy, const Objective& objective,
                  const std::vector<std::uint64_t>& seeds, const RunConfig& cfg,
                  const HyperInit& init, const SweepOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("sweep: seed list is empty");
  cfg.Validate();
  const std::size_t n = seeds.size();
  std::vector<RunTrace> traces(n);
  std::vector<SeedOutcome> outcomes(n);

  auto run_one = [&](std::size_t i) {
    RunConfig c = cfg;
    c.seed = seeds[i];
    RunTrace trace;
    try {
      trace = policy == Policy::kAdaptive ? Run(objective, c, init)
                                            : RunBaselineUnconstrained(objective, c);
    } catch (const std::exception& e) {
      trace.config = c;
      trace.policy = policy;
      trace.abort_reason = e.what();
    }
    outcomes[i] = SummarizeRun(trace, options.threshold);
    if (options.keep_traces) traces[i] = std::move(trace);
  };

  const int threads = options.threads > 0 ? options.threads : ThreadsFromEnvironment();
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto workers = std::min<std::size_t>(threads, n);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.summary = Aggregate(policy, std::move(outcomes), options.threshold);
  if (options.keep_traces) result.traces = std::move(traces);
  return result;
}

}  // namespace eibo
