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

#include "eibo/infogain.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eibo/errors.h"
#include "eibo/gp.h"

namespace eibo {

double InfoGainLogDet(const KernelSpec& spec, const Eigen::MatrixXd& x,
                      double sigma) {
  if (x.rows() == 0) throw std::invalid_argument("info gain: empty point set");
  if (!(sigma > 0.0)) throw std::invalid_argument("info gain: sigma must be > 0");
  if (std::isinf(sigma)) return 0.0;
  Eigen::MatrixXd m = KernelMatrix(spec, x) / (sigma * sigma);
  m.diagonal().array() += 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::VectorXd u = lu.matrixLU().diagonal();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(std::abs(u[i]) > 0.0) || !std::isfinite(u[i])) {
      throw NumericalError("info gain: singular I + K / sigma^2");
    }
    logdet += std::log(std::abs(u[i]));
  }
  return std::max(0.0, 0.5 * logdet);
}

InfoGainReport InfoGainSequential(const KernelSpec& spec,
                                  const Eigen::MatrixXd& x, double sigma) {
  if (x.rows() == 0) throw std::invalid_argument("info gain: empty point set");
  InfoGainReport report;
  report.per_point_terms.reserve(x.rows());
  const double inv_s2 = 1.0 / (sigma * sigma);
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    Dataset prefix(x.topRows(t), Eigen::VectorXd::Zero(t), sigma);
    const Posterior p = Posterior::Fit(spec, std::move(prefix));
    const double var = p.Variance(x.row(t).transpose());
    const double term = 0.5 * std::log1p(inv_s2 * var);
    report.per_point_terms.push_back(term);
    report.total += term;
  }
  report.logdet_total = InfoGainLogDet(spec, x, sigma);
  return report;
}

GreedySelection GreedyMaxInfoGain(const KernelSpec& spec,
                                  const Eigen::MatrixXd& candidates, int count,
                                  double sigma) {
  if (count < 0 || count > candidates.rows()) {
    throw std::invalid_argument("greedy info gain: T=" + std::to_string(count) +
                                " exceeds " + std::to_string(candidates.rows()) +
                                " candidates");
  }
  GreedySelection out;
  Dataset chosen = Dataset::Empty(static_cast<int>(candidates.cols()), sigma);
  std::vector<bool> used(candidates.rows(), false);
  for (int step = 0; step < count; ++step) {
    const Posterior p = Posterior::Fit(spec, chosen);
    Eigen::VectorXd var;
    p.MeanAndVariance(candidates, nullptr, &var);
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
      if (used[i]) continue;
      if (best < 0 || var[i] > var[best]) best = i;
    }
    used[best] = true;
    out.indices.push_back(best);
    out.value += 0.5 * std::log1p(var[best] / (sigma * sigma));
    chosen.Append(candidates.row(best).transpose(), 0.0);
  }
  out.points = chosen.inputs;
  return out;
}

double XiStatistic(double info_gain, int t, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("xi statistic: delta must lie in (0, 1)");
  }
  if (t < 1) throw std::invalid_argument("xi statistic: t must be >= 1");
  if (!std::isfinite(info_gain) || info_gain < 0.0) {
    throw std::invalid_argument("xi statistic: information gain must be finite and >= 0");
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double tt = static_cast<double>(t) * t;
  const double base = tt * pi2 / (3.0 * delta);
  return info_gain + std::sqrt(std::log(2.0 * base)) * std::sqrt(info_gain) +
         std::log(base);
}

double GammaRate(KernelFamily family, int dim, double horizon) {
  const double log_t = std::log(horizon);
  switch (family) {
    case KernelFamily::kSquaredExponential:
      return std::pow(log_t, dim + 1);
    case KernelFamily::kMatern52: {
      const double smoothness = 2.5;
      const double dd = static_cast<double>(dim) * (dim + 1);
      return std::pow(horizon, dd / (2.0 * smoothness + dd)) * log_t;
    }
  }
  return 0.0;
}

std::vector<double> GammaRateCurve(KernelFamily family, int dim, int horizon) {
  if (horizon < 2) throw std::invalid_argument("gamma rate curve: need T >= 2");
  std::vector<double> out;
  out.reserve(horizon - 1);
  for (int t = 2; t <= horizon; ++t) out.push_back(GammaRate(family, dim, t));
  return out;
}

}  // namespace eibo
