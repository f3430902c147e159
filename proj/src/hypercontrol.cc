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

#include "eibo/hypercontrol.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "eibo/errors.h"

namespace eibo {

void HyperBounds::Validate() const {
  if (lower.dim() != upper.dim()) {
    throw std::invalid_argument("hyper bounds: lower and upper differ in dimension");
  }
  if (!lower.AllLessEqual(upper)) {
    throw std::invalid_argument("hyper bounds: need theta_lower <= theta_upper componentwise");
  }
}

bool HyperBounds::Contains(const LengthScales& theta) const {
  return theta.dim() == lower.dim() && lower.AllLessEqual(theta) &&
         theta.AllLessEqual(upper);
}

LengthScales HyperBounds::Clamp(const LengthScales& theta) const {
  return LengthScales(theta.values().cwiseMax(lower.values()).cwiseMin(upper.values()));
}

LengthScales HyperBounds::GeometricMidpoint() const {
  Eigen::VectorXd mid = (lower.values().array() * upper.values().array()).sqrt();
  // Round-off must not push the midpoint outside the box.
  return Clamp(LengthScales(std::move(mid)));
}

double HyperBounds::VolumeRatio() const {
  return (upper.values().array() / lower.values().array()).prod();
}

void ControllerConfig::Validate() const {
  if (!(t_sigma > 0.0) || !std::isfinite(t_sigma)) {
    throw std::invalid_argument("controller: t_sigma must satisfy t_sigma > 0");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("controller: p must lie in (0, 1)");
  }
  if (!(c1 > 0.0 && c2 > c1) || !std::isfinite(c2)) {
    throw std::invalid_argument("controller: constants must satisfy c2 > c1 > 0");
  }
  if (e_threshold < 1) {
    throw std::invalid_argument("controller: e_threshold must be a positive integer");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("controller: delta must lie in (0, 1)");
  }
}

HyperState UpdateConfidenceCounter(HyperState state, double var_at_selected,
                                   double sigma, const ControllerConfig& cfg) {
  if (var_at_selected < cfg.t_sigma * sigma * sigma) {
    ++state.e_counter;
  } else {
    state.e_counter = 0;
  }
  return state;
}

HyperBounds ShrinkUpperBounds(const HyperBounds& bounds, double p) {
  const Eigen::VectorXd& up = bounds.upper.values();
  const Eigen::VectorXd& lo = bounds.lower.values();
  const double cap = p * up.maxCoeff();
  Eigen::VectorXd next(up.size());
  for (Eigen::Index i = 0; i < up.size(); ++i) {
    next[i] = std::max(std::min(cap, up[i]), lo[i]);
  }
  return HyperBounds{bounds.lower, LengthScales(std::move(next))};
}

namespace {

double RadicalInverse(unsigned index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

class LikelihoodProbe {
 public:
  LikelihoodProbe(const Dataset& data, KernelFamily family)
      : data_(data), family_(family) {}

  double operator()(const Eigen::VectorXd& log_theta) {
    try {
      const KernelSpec spec{family_, LengthScales(log_theta.array().exp().matrix())};
      ++evaluations_;
      return LogMarginalLikelihood(spec, data_);
    } catch (const NumericalError&) {
      ++failures_;
      return -std::numeric_limits<double>::infinity();
    }
  }

  int evaluations() const { return evaluations_; }
  int failures() const { return failures_; }

 private:
  const Dataset& data_;
  KernelFamily family_;
  int evaluations_ = 0;
  int failures_ = 0;
};

}  // namespace

LengthScales EstimateThetaConstrained(const Dataset& data,
                                      const HyperBounds& bounds,
                                      KernelFamily family,
                                      const ThetaSearchOptions& options) {
  bounds.Validate();
  if (data.dim() != bounds.lower.dim()) {
    throw std::invalid_argument("theta search: data and bounds differ in dimension");
  }
  if (data.size() == 0) return bounds.GeometricMidpoint();

  const int d = bounds.lower.dim();
  const Eigen::VectorXd log_lo = bounds.lower.values().array().log();
  const Eigen::VectorXd log_hi = bounds.upper.values().array().log();
  const Eigen::VectorXd range = log_hi - log_lo;
  if ((range.array() <= 0.0).all()) return bounds.lower;

  const int starts = std::max(1, std::min(options.seeds_per_dim * d, options.max_seeds));
  const double cells = d == 1 ? starts : std::pow(static_cast<double>(starts), 1.0 / d);
  const Eigen::VectorXd half_width = range / cells;
  constexpr double kInvPhi = 0.61803398874989484820;

  LikelihoodProbe probe(data, family);
  Eigen::VectorXd best_x = 0.5 * (log_lo + log_hi);
  double best_f = -std::numeric_limits<double>::infinity();

  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) {
      const double u = d == 1 ? (s + 0.5) / starts
                              : RadicalInverse(static_cast<unsigned>(s) + 1, kPrimes[j % 12]);
      x[j] = log_lo[j] + u * range[j];
    }
    double fx = probe(x);
    for (int j = 0; j < d; ++j) {
      if (range[j] <= 0.0) continue;
      double a = std::max(log_lo[j], x[j] - half_width[j]);
      double b = std::min(log_hi[j], x[j] + half_width[j]);
      Eigen::VectorXd trial = x;
      double c = b - kInvPhi * (b - a);
      double e = a + kInvPhi * (b - a);
      trial[j] = c;
      double fc = probe(trial);
      trial[j] = e;
      double fe = probe(trial);
      for (int it = 0; it < options.golden_iterations; ++it) {
        if (fc >= fe) {
          b = e;
          e = c;
          fe = fc;
          c = b - kInvPhi * (b - a);
          trial[j] = c;
          fc = probe(trial);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + kInvPhi * (b - a);
          trial[j] = e;
          fe = probe(trial);
        }
      }
      const double cand = fc >= fe ? c : e;
      const double fcand = std::max(fc, fe);
      if (fcand > fx) {
        x[j] = cand;
        fx = fcand;
      }
    }
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  if (!std::isfinite(best_f)) {
    throw NumericalError("theta search: every likelihood probe failed (" +
                         std::to_string(probe.failures()) + " probes)");
  }
  Eigen::VectorXd theta = best_x.array().exp();
  return bounds.Clamp(LengthScales(std::move(theta)));
}

double SignalScaleEstimate(const Dataset& data, const KernelSpec& spec) {
  if (data.size() == 0) return 0.0;
  const Posterior p = Posterior::Fit(spec, data);
  return std::sqrt(std::max(0.0, p.DataFit()) / data.size());
}

double ClampNu(double estimate, double xi, const ControllerConfig& cfg) {
  if (!(cfg.c1 > 0.0 && cfg.c2 > cfg.c1)) {
    throw std::invalid_argument("nu: constants must satisfy c2 > c1 > 0");
  }
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    // Smallest value the xi statistic can take (t = 1, zero information).
    xi = std::log(std::numbers::pi * std::numbers::pi / (3.0 * cfg.delta));
  }
  return std::clamp(estimate, cfg.c1 * xi, cfg.c2 * xi);
}

double ChooseNu(double xi, double previous_nu, const Dataset& data,
                const KernelSpec& spec, const ControllerConfig& cfg) {
  const double estimate =
      data.size() == 0 ? previous_nu : SignalScaleEstimate(data, spec);
  return ClampNu(estimate, xi, cfg);
}

}  // namespace eibo
