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

#ifndef EIBO_BENCHLAB_H_
#define EIBO_BENCHLAB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eibo/engine.h"

namespace eibo {

enum class NoiseFamily { kGaussian, kSymmetricBernoulli, kUniform };

std::string_view ToString(NoiseFamily family);
NoiseFamily ParseNoiseFamily(std::string_view name);

/// sigma-sub-Gaussian noise: N(0, sigma^2), +-sigma with probability 1/2,
/// or uniform on [-sigma sqrt(3), sigma sqrt(3)].
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kGaussian;
  double scale = 0.01;
};

double SampleNoise(const NoiseSpec& spec, Rng& rng);

/// f(x) = 2 k_SE^{0.1}(0.1, x) + 4 k_SE^{0.01}(0.9, x) on [0, 1]: a wide
/// local bump of height 2 and a narrow global peak of height 4.
struct TrapObjective {
  double center_wide = 0.1;
  double center_narrow = 0.9;
  double amplitude_wide = 2.0;
  double amplitude_narrow = 4.0;
  double lengthscale_wide = 0.1;
  double lengthscale_narrow = 0.01;
  NoiseSpec noise{NoiseFamily::kGaussian, 0.01};

  double Noiseless(double x) const;
  // Throws std::invalid_argument for x outside [0, 1]. `rng` is required
  // when `noisy` is set.
  double Eval(double x, bool noisy, Rng* rng) const;
  double OptimumValue() const { return Noiseless(center_narrow); }

  Objective AsObjective() const;
};

/// 3 k_SE^{0.2}(0.6, x) on [0, 1] with Gaussian noise: one broad peak.
struct WidePeakObjective {
  double center = 0.6;
  double amplitude = 3.0;
  double lengthscale = 0.2;
  NoiseSpec noise{NoiseFamily::kGaussian, 0.01};

  double Noiseless(double x) const;
  Objective AsObjective() const;
};

/// Objective by name: "trap" or "wide_peak", with the given noise.
Objective MakeObjective(std::string_view name, const NoiseSpec& noise);

/// Finite-sample RKHS norm estimate: sqrt(f^T K^-1 f) for the noiseless
/// objective on 64 points of `domain` (a uniform grid for d = 1), under the
/// kernel with length scales `theta`. Throws std::invalid_argument if the
/// objective does not report noiseless values.
double GridRkhsNorm(const Objective& objective, const Box& domain,
                    KernelFamily family, const LengthScales& theta);

/// Bounds used to emulate unconstrained maximum likelihood.
inline constexpr double kBaselineThetaLower = 1e-4;
inline constexpr double kBaselineThetaUpper = 1e2;

/// EI with maximum-likelihood length scales over [1e-4, 1e2]^d, no bound
/// shrinkage and nu fixed to 1. theta_1 is the geometric midpoint.
RunTrace RunBaselineUnconstrained(const Objective& objective, const RunConfig& cfg);

inline constexpr double kTrapSuccessThreshold = 3.5;

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double best_f = 0.0;
  bool success = false;
  double cumulative_regret = 0.0;  // R_T
  double regret_rate = 0.0;        // R_T / T
  double regret_rate_at_10 = 0.0;  // R_10 / 10, NaN if T < 10
  int shrink_events = 0;
  int mean_gap_violations = 0;
  bool variance_sum_holds = true;
};

struct SweepSummary {
  Policy policy = Policy::kAdaptive;
  int n_seeds = 0;
  double success_rate = 0.0;
  double threshold = kTrapSuccessThreshold;
  double median_RT = 0.0;
  // (q, R_T / T quantile) for q in {0.1, 0.25, 0.5, 0.75, 0.9}.
  std::vector<std::pair<double, double>> quantiles_RT_over_T;
  std::vector<std::uint64_t> failed_seeds;
  std::vector<SeedOutcome> outcomes;
};

struct SweepOptions {
  double threshold = kTrapSuccessThreshold;
  int threads = 1;  // <= 0 reads EIBO_THREADS, defaulting to 1
  bool keep_traces = false;
};

struct SweepResult {
  SweepSummary summary;
  std::vector<RunTrace> traces;  // ordered like the seed list when kept
};

/// Runs one seed per entry (the config's seed is replaced). For
/// Policy::kBaselineML `init` is ignored. Failed runs are recorded, not
/// fatal. Results are aggregated in seed-list order.
SweepResult Sweep(Policy policy, const Objective& objective,
                  const std::vector<std::uint64_t>& seeds, const RunConfig& cfg,
                  const HyperInit& init, const SweepOptions& options = {});

SeedOutcome SummarizeRun(const RunTrace& trace, double threshold);
SweepSummary Aggregate(Policy policy, std::vector<SeedOutcome> outcomes,
                       double threshold);

/// Linear-interpolation quantile of an unsorted sample.
double Quantile(std::vector<double> values, double q);

int ThreadsFromEnvironment();

}  // namespace eibo

#endif  // EIBO_BENCHLAB_H_
