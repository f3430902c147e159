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

#include "eibo/engine.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "eibo/errors.h"
#include "eibo/infogain.h"

namespace eibo {

std::string_view ToString(Policy policy) {
  switch (policy) {
    case Policy::kAdaptive:
      return "algorithm1";
    case Policy::kBaselineML:
      return "baseline_ml";
  }
  return "unknown";
}

Policy ParsePolicy(std::string_view name) {
  if (name == "algorithm1") return Policy::kAdaptive;
  if (name == "baseline_ml") return Policy::kBaselineML;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected algorithm1 or baseline_ml)");
}

void RunConfig::Validate() const {
  domain.Validate();
  if (horizon < 1) throw std::invalid_argument("run config: horizon must be >= 1");
  if (n0 < 0) throw std::invalid_argument("run config: n0 must be >= 0");
  if (!(noise_std > 0.0) || !std::isfinite(noise_std)) {
    throw std::invalid_argument("run config: sigma must be finite and > 0");
  }
  if (initial_box) {
    initial_box->Validate();
    if (initial_box->dim() != domain.dim()) {
      throw std::invalid_argument("run config: initial box dimension differs from domain");
    }
  }
  controller.Validate();
}

std::optional<double> RunTrace::BestNoiselessValue() const {
  std::optional<double> best;
  for (Eigen::Index i = 0; i < initial_noiseless.size(); ++i) {
    const double f = initial_noiseless[i];
    if (std::isnan(f)) continue;
    if (!best || f > *best) best = f;
  }
  for (const auto& r : records) {
    if (r.f_noiseless && (!best || *r.f_noiseless > *best)) best = r.f_noiseless;
  }
  return best;
}

Dataset RunTrace::AllData() const {
  Dataset data(initial_design, initial_outputs, config.noise_std);
  for (const auto& r : records) data.Append(r.x, r.y);
  return data;
}

Eigen::MatrixXd RunTrace::SelectedPoints() const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(records.size()), config.domain.dim());
  for (std::size_t i = 0; i < records.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = records[i].x.transpose();
  }
  return x;
}

std::optional<double> MeanGapSlack(const Posterior& posterior,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_t,
                                   double mu_plus, double nu, int t, double sigma) {
  if (t < 2) return std::nullopt;
  const double s2 = sigma * sigma;
  const double width = std::sqrt(std::log(t - 1 + s2) - std::log(s2));
  const double rhs = width * nu * std::sqrt(posterior.Variance(x_t));
  const double lhs = std::abs(posterior.Mean(x_t) - mu_plus);
  return rhs - lhs;
}

namespace {

constexpr double kMeanGapTolerance = -1e-8;

double InfoGainOrZero(const KernelSpec& spec, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  return InfoGainLogDet(spec, data.inputs, data.noise_std);
}

VarianceSumCheck ThetaLowerVarianceSum(const RunTrace& trace) {
  VarianceSumCheck check;
  const Eigen::MatrixXd x = trace.SelectedPoints();
  if (x.rows() == 0) return check;
  const double sigma = trace.config.noise_std;
  const KernelSpec spec{trace.config.kernel, trace.final_bounds.lower};
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    const Posterior p = Posterior::Fit(
        spec, Dataset(x.topRows(t), Eigen::VectorXd::Zero(t), sigma));
    check.variance_sum += p.Variance(x.row(t).transpose());
  }
  check.bound = 2.0 / std::log1p(1.0 / (sigma * sigma)) *
                InfoGainLogDet(spec, x, sigma);
  return check;
}

}  // namespace

RunTrace Run(const Objective& objective, const RunConfig& cfg,
             const HyperInit& init) {
  return RunWithPolicy(objective, cfg, init, Policy::kAdaptive);
}

RunTrace RunWithPolicy(const Objective& objective, const RunConfig& cfg,
                       const HyperInit& init, Policy policy) {
  cfg.Validate();
  init.bounds.Validate();
  const int d = cfg.domain.dim();
  if (init.bounds.lower.dim() != d) {
    throw std::invalid_argument("run: length-scale bounds have dimension " +
                                std::to_string(init.bounds.lower.dim()) +
                                ", domain has " + std::to_string(d));
  }
  if (!init.bounds.Contains(init.theta)) {
    throw std::invalid_argument("run: need theta_lower <= theta_init <= theta_upper");
  }
  if (!objective.evaluate) throw std::invalid_argument("run: objective has no evaluator");

  const double sigma = cfg.noise_std;
  const ControllerConfig& ctl = cfg.controller;
  const bool adaptive = policy == Policy::kAdaptive;

  RunTrace trace;
  trace.config = cfg;
  trace.policy = policy;
  trace.objective_name = objective.name;
  trace.initial_bounds = init.bounds;
  trace.final_bounds = init.bounds;

  Rng rng(cfg.seed);
  const Box& init_box = cfg.initial_box ? *cfg.initial_box : cfg.domain;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  trace.initial_design.resize(cfg.n0, d);
  trace.initial_outputs.resize(cfg.n0);
  trace.initial_noiseless = Eigen::VectorXd::Constant(
      cfg.n0, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < cfg.n0; ++i) {
    for (int j = 0; j < d; ++j) {
      trace.initial_design(i, j) =
          init_box.lower[j] + (init_box.upper[j] - init_box.lower[j]) * unif(rng);
    }
  }
  for (int i = 0; i < cfg.n0; ++i) {
    try {
      const Observation obs = objective.evaluate(trace.initial_design.row(i).transpose(), rng);
      trace.initial_outputs[i] = obs.y;
      if (obs.f_noiseless) trace.initial_noiseless[i] = *obs.f_noiseless;
    } catch (const std::exception& e) {
      trace.initial_design.conservativeResize(i, Eigen::NoChange);
      trace.initial_outputs.conservativeResize(i);
      trace.initial_noiseless.conservativeResize(i);
      trace.abort_reason = std::string("objective failed in initial design: ") + e.what();
      return trace;
    }
  }

  Dataset data(trace.initial_design, trace.initial_outputs, sigma);
  const Eigen::MatrixXd candidates = MakeCandidates(cfg.domain, cfg.candidates);

  HyperState state{init.bounds, init.theta, 1.0, 0, 0};
  double xi = 0.0;
  try {
    xi = XiStatistic(InfoGainOrZero({cfg.kernel, state.theta}, data), 1, ctl.delta);
    state.nu = adaptive ? ChooseNu(xi, 1.0, data, {cfg.kernel, state.theta}, ctl) : 1.0;
  } catch (const NumericalError& e) {
    trace.abort_reason = std::string("numerical failure before round 1: ") + e.what();
    return trace;
  }

  double cumulative = 0.0;
  double realized_info = 0.0;
  const double inv_s2 = 1.0 / (sigma * sigma);

  for (int t = 1; t <= cfg.horizon; ++t) {
    IterationRecord rec;
    rec.t = t;
    rec.theta = state.theta;
    rec.nu = state.nu;
    rec.xi = xi;
    try {
      const Posterior post = Posterior::Fit({cfg.kernel, state.theta}, data);
      AcquisitionQuery query;
      query.posterior = &post;
      query.nu = state.nu;
      query.candidates = candidates;
      query.domain = cfg.domain;
      query.refinement = cfg.candidates;
      const AcquisitionResult best = MaximizeAcquisition(query);
      rec.x = best.point;
      rec.mu_plus = best.mu_plus;
      rec.var_before = post.Variance(rec.x);
      if (cfg.check_mode != CheckMode::kOff) {
        rec.mean_gap_slack =
            MeanGapSlack(post, rec.x, best.mu_plus, state.nu, data.size() + 1, sigma);
      }
    } catch (const NumericalError& e) {
      trace.abort_reason = "numerical failure at round " + std::to_string(t) + ": " + e.what();
      break;
    }
    if (rec.mean_gap_slack && *rec.mean_gap_slack < kMeanGapTolerance) {
      ++trace.mean_gap_violations;
      if (cfg.check_mode == CheckMode::kAssert) {
        std::ostringstream msg;
        msg << "mean-gap bound violated at round " << t << " (slack "
            << *rec.mean_gap_slack << ")";
        trace.abort_reason = msg.str();
        trace.records.push_back(std::move(rec));
        break;
      }
    }

    Observation obs;
    try {
      obs = objective.evaluate(rec.x, rng);
    } catch (const std::exception& e) {
      trace.abort_reason = "objective failed at round " + std::to_string(t) + ": " + e.what();
      break;
    }
    rec.y = obs.y;
    rec.f_noiseless = obs.f_noiseless;
    if (obs.f_noiseless && objective.optimum) {
      const double r = std::max(0.0, *objective.optimum - *obs.f_noiseless);
      cumulative += r;
      rec.regret = r;
      rec.cumulative_regret = cumulative;
    }

    state = UpdateConfidenceCounter(std::move(state), rec.var_before, sigma, ctl);
    if (state.e_counter >= ctl.e_threshold) {
      if (adaptive) {
        state.bounds = ShrinkUpperBounds(state.bounds, ctl.p);
        ++state.shrink_events;
        rec.shrink = true;
      }
      state.e_counter = 0;
    }
    rec.e_counter = state.e_counter;
    rec.theta_upper = state.bounds.upper;
    data.Append(rec.x, rec.y);
    realized_info += 0.5 * std::log1p(inv_s2 * rec.var_before);
    trace.variance_sum_realized.variance_sum += rec.var_before;
    trace.records.push_back(std::move(rec));

    if (t == cfg.horizon) break;
    try {
      state.theta = EstimateThetaConstrained(data, state.bounds, cfg.kernel);
      const KernelSpec next{cfg.kernel, state.theta};
      xi = XiStatistic(InfoGainOrZero(next, data), t + 1, ctl.delta);
      state.nu = adaptive ? ChooseNu(xi, state.nu, data, next, ctl) : 1.0;
    } catch (const NumericalError& e) {
      trace.abort_reason = "numerical failure choosing hyper-parameters after round " +
                           std::to_string(t) + ": " + e.what();
      break;
    }
  }

  trace.final_bounds = state.bounds;
  trace.shrink_events = state.shrink_events;
  trace.variance_sum_realized.bound = 2.0 / std::log1p(inv_s2) * realized_info;
  try {
    trace.variance_sum_theta_lower = ThetaLowerVarianceSum(trace);
  } catch (const NumericalError&) {
    trace.variance_sum_theta_lower = VarianceSumCheck{};
  }
  return trace;
}

double ComputeC2(const HyperBounds& bounds) { return bounds.VolumeRatio(); }

double BetaT(int horizon, double sigma, double gamma_prev, double c2,
             double rkhs_norm, double delta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double tt = static_cast<double>(horizon) * horizon;
  const double log_ts = std::log(horizon / (sigma * sigma));
  const double log_conf = std::log(4.0 * tt * pi2 / (6.0 * delta));
  return 2.0 * log_ts * gamma_prev +
         std::sqrt(8.0) * log_ts * std::sqrt(log_conf) *
             (std::sqrt(c2) * rkhs_norm + std::sqrt(gamma_prev)) +
         c2 * rkhs_norm * rkhs_norm;
}

double PhiT(int t, double sigma, double gamma_prev, double rkhs_norm, double delta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double tt = static_cast<double>(t) * t;
  const double l1 = std::log(tt * pi2 / (3.0 * delta));
  const double l2 = std::log(2.0 * tt * pi2 / (3.0 * delta));
  const double phi2 = rkhs_norm * rkhs_norm + std::sqrt(8.0 * gamma_prev * l1) +
                      std::sqrt(2.0 * l2) * rkhs_norm + 2.0 * gamma_prev +
                      2.0 * sigma * l1;
  return std::sqrt(std::max(0.0, phi2));
}

BoundDiagnostics ComputeBoundDiagnostics(const RunTrace& trace, double rkhs_norm,
                                         double delta) {
  if (rkhs_norm < 0.0) throw std::invalid_argument("bound diagnostics: rkhs norm must be >= 0");
  BoundDiagnostics out;
  out.rkhs_norm = rkhs_norm;
  out.c2 = ComputeC2(trace.final_bounds);
  const double sigma = trace.config.noise_std;
  const Eigen::MatrixXd x = trace.SelectedPoints();
  const KernelSpec spec{trace.config.kernel, trace.final_bounds.lower};
  const int horizon = static_cast<int>(x.rows());
  std::vector<double> gamma(horizon + 1, 0.0);
  for (int t = 1; t <= horizon; ++t) {
    gamma[t] = InfoGainLogDet(spec, x.topRows(t), sigma);
  }
  for (int t = 1; t <= horizon; ++t) {
    out.phi.push_back(PhiT(t, sigma, gamma[t - 1], rkhs_norm, delta));
    const double beta = BetaT(t, sigma, gamma[t - 1], out.c2, rkhs_norm, delta);
    out.beta.push_back(beta);
    out.gamma.push_back(gamma[t]);
    out.bound_curve.push_back(beta * std::sqrt(gamma[t] * t));
  }
  out.info_gain_realized = gamma[horizon];
  out.beta_T = out.beta.empty() ? 0.0 : out.beta.back();
  return out;
}

double RkhsNormProxy(const KernelSpec& spec, const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& values) {
  if (points.rows() != values.size()) {
    throw std::invalid_argument("rkhs norm proxy: points and values differ in length");
  }
  if (points.rows() == 0) return 0.0;
  static constexpr double kLadder[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
  const JitteredCholesky chol = JitteredCholesky::Compute(KernelMatrix(spec, points), kLadder);
  return std::sqrt(std::max(0.0, values.dot(chol.llt.solve(values))));
}

RegretSeries ComputeRegretSeries(const RunTrace& trace, double f_star) {
  RegretSeries out;
  double total = 0.0;
  for (const auto& r : trace.records) {
    if (!r.f_noiseless) {
      throw std::invalid_argument("regret: trace has no noiseless values at round " +
                                  std::to_string(r.t));
    }
    const double gap = f_star - *r.f_noiseless;
    if (gap < -1e-9) {
      std::ostringstream msg;
      msg << "regret: f_star " << f_star << " is below the observed value "
          << *r.f_noiseless << " at round " << r.t;
      throw std::invalid_argument(msg.str());
    }
    const double rt = std::max(0.0, gap);
    total += rt;
    out.instantaneous.push_back(rt);
    out.cumulative.push_back(total);
  }
  return out;
}

}  // namespace eibo
