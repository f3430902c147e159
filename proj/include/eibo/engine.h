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

#ifndef EIBO_ENGINE_H_
#define EIBO_ENGINE_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eibo/acquisition.h"
#include "eibo/gp.h"
#include "eibo/hypercontrol.h"
#include "eibo/kernel.h"

namespace eibo {

using Rng = std::mt19937_64;

/// One query of a black-box objective. `f_noiseless` is only known for
/// synthetic objectives.
struct Observation {
  double y = 0.0;
  std::optional<double> f_noiseless;
};

struct Objective {
  std::string name;
  std::function<Observation(const Eigen::VectorXd&, Rng&)> evaluate;
  // Noiseless value of the global maximum, when known.
  std::optional<double> optimum;
};

enum class CheckMode { kOff, kRecord, kAssert };

enum class Policy { kAdaptive, kBaselineML };

std::string_view ToString(Policy policy);
Policy ParsePolicy(std::string_view name);

struct RunConfig {
  Box domain = Box::Unit(1);
  int horizon = 60;
  ControllerConfig controller;
  KernelFamily kernel = KernelFamily::kSquaredExponential;
  int n0 = 3;
  // Initial design is drawn uniformly from this box when set, otherwise
  // from `domain`.
  std::optional<Box> initial_box;
  CandidateSpec candidates;
  std::uint64_t seed = 0;
  double noise_std = 0.01;
  CheckMode check_mode = CheckMode::kRecord;

  void Validate() const;
};

/// Initial hyper-parameters: bounds plus theta_1 inside them.
struct HyperInit {
  HyperBounds bounds;
  LengthScales theta;
};

struct IterationRecord {
  int t = 0;
  Eigen::VectorXd x;
  double y = 0.0;
  std::optional<double> f_noiseless;
  LengthScales theta = LengthScales{1.0};
  double nu = 0.0;
  double xi = 0.0;
  double var_before = 0.0;  // posterior variance at x_t before querying it
  double mu_plus = 0.0;
  int e_counter = 0;  // after the update for this round
  bool shrink = false;
  std::optional<double> regret;
  std::optional<double> cumulative_regret;
  std::optional<double> mean_gap_slack;  // unset when the check is skipped
  LengthScales theta_upper = LengthScales{1.0};  // upper bound after this round
};

/// The two sides of the variance-sum bound
/// sum_t var_{t-1}(x_t) <= 2 / log(1 + sigma^-2) * I(y_T; f_T).
struct VarianceSumCheck {
  double variance_sum = 0.0;
  double bound = 0.0;
  bool holds() const { return variance_sum <= bound + 1e-8 * std::max(1.0, bound); }
};

struct RunTrace {
  RunConfig config;
  Policy policy = Policy::kAdaptive;
  std::string objective_name;
  Eigen::MatrixXd initial_design;
  Eigen::VectorXd initial_outputs;
  Eigen::VectorXd initial_noiseless;  // NaN where unknown
  std::vector<IterationRecord> records;
  HyperBounds final_bounds{LengthScales{1.0}, LengthScales{1.0}};
  HyperBounds initial_bounds{LengthScales{1.0}, LengthScales{1.0}};
  int shrink_events = 0;
  // Realized sequence, with each var_before under the theta used that round.
  VarianceSumCheck variance_sum_realized;
  // Selected points only, under the final lower bound theta^L, with the
  // information gain from the log-det route.
  VarianceSumCheck variance_sum_theta_lower;
  int mean_gap_violations = 0;
  std::optional<std::string> abort_reason;

  bool completed() const { return !abort_reason.has_value(); }
  // Largest noiseless value among the BO rounds and the initial design.
  std::optional<double> BestNoiselessValue() const;
  // All observed data (initial design + rounds).
  Dataset AllData() const;
  Eigen::MatrixXd SelectedPoints() const;
};

/// Raised in CheckMode::kAssert when a runtime bound check fails.
class RuntimeCheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs `cfg.horizon` rounds of EI-based optimization with the adaptive
/// hyper-parameter controller. Deterministic given the config and seed.
RunTrace Run(const Objective& objective, const RunConfig& cfg,
             const HyperInit& init);

// Shared loop; Policy::kBaselineML skips bound shrinkage and fixes nu = 1.
RunTrace RunWithPolicy(const Objective& objective, const RunConfig& cfg,
                       const HyperInit& init, Policy policy);

/// RHS - LHS of |mu(x_t) - mu_plus| <= sqrt(log(t - 1 + s^2) - log s^2) nu sd(x_t),
/// where t - 1 is the number of observations the posterior conditions on.
/// Unset for t < 2.
std::optional<double> MeanGapSlack(const Posterior& posterior,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_t,
                                   double mu_plus, double nu, int t, double sigma);

struct BoundDiagnostics {
  double info_gain_realized = 0.0;  // I(y_T; f_T) under theta^L
  double c2 = 1.0;
  double rkhs_norm = 0.0;
  std::vector<double> phi;          // phi_t, t = 1..T
  double beta_T = 0.0;
  std::vector<double> beta;         // beta_t, t = 1..T
  std::vector<double> gamma;        // realized gamma_t, t = 1..T (gamma_0 = 0)
  std::vector<double> bound_curve;  // beta_t sqrt(gamma_t t), t = 1..T
};

/// C2 = prod upper_i / lower_i.
double ComputeC2(const HyperBounds& bounds);

/// beta_T with gamma_{T-1}, C2 and ||f|| supplied directly.
double BetaT(int horizon, double sigma, double gamma_prev, double c2,
             double rkhs_norm, double delta);

/// phi_T from ||f||, gamma_{T-1}, sigma and delta.
double PhiT(int t, double sigma, double gamma_prev, double rkhs_norm, double delta);

BoundDiagnostics ComputeBoundDiagnostics(const RunTrace& trace, double rkhs_norm,
                                         double delta);

/// sqrt(f^T (K^theta)^{-1} f) for noiseless values f on `points`; a lower
/// bound on the RKHS norm of any function taking those values.
double RkhsNormProxy(const KernelSpec& spec, const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& values);

struct RegretSeries {
  std::vector<double> instantaneous;
  std::vector<double> cumulative;
};

/// r_t = f_star - f(x_t) and the running sum. Throws std::invalid_argument
/// if some recorded noiseless value exceeds f_star by more than 1e-9, or if
/// the trace has no noiseless values.
RegretSeries ComputeRegretSeries(const RunTrace& trace, double f_star);

}  // namespace eibo

#endif  // EIBO_ENGINE_H_
