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

#ifndef EIBO_INFOGAIN_H_
#define EIBO_INFOGAIN_H_

#include <vector>

#include <Eigen/Dense>

#include "eibo/kernel.h"

namespace eibo {

// All information quantities are in nats.

/// 1/2 log det(I + sigma^-2 K(X, X)), computed through a pivoted LU
/// factorization (independent of the Cholesky path used by the GP).
double InfoGainLogDet(const KernelSpec& spec, const Eigen::MatrixXd& x,
                      double sigma);

struct InfoGainReport {
  // 1/2 log(1 + sigma^-2 var_{t-1}(x_t)), one entry per row of X.
  std::vector<double> per_point_terms;
  double total = 0.0;
  double logdet_total = 0.0;
};

/// Sequential decomposition: each term conditions a fresh posterior on
/// the rows before it.
InfoGainReport InfoGainSequential(const KernelSpec& spec,
                                  const Eigen::MatrixXd& x, double sigma);

struct GreedySelection {
  std::vector<Eigen::Index> indices;
  Eigen::MatrixXd points;
  double value = 0.0;
};

/// Repeatedly adds the candidate with the largest posterior variance
/// (lowest index on ties). The returned value is a lower bound on the
/// maximum information gain over |A| = count subsets of the candidates.
GreedySelection GreedyMaxInfoGain(const KernelSpec& spec,
                                  const Eigen::MatrixXd& candidates, int count,
                                  double sigma);

/// I + sqrt(log(2 t^2 pi^2 / (3 delta))) sqrt(I) + log(t^2 pi^2 / (3 delta)).
double XiStatistic(double info_gain, int t, double delta);

/// Unit-constant growth rate of the maximum information gain at horizon T:
/// (log T)^(d+1) for SE, T^(d(d+1)/(2 nu + d(d+1))) log T for Matern nu=5/2.
double GammaRate(KernelFamily family, int dim, double horizon);

/// GammaRate evaluated at t = 2..T.
std::vector<double> GammaRateCurve(KernelFamily family, int dim, int horizon);

}  // namespace eibo

#endif  // EIBO_INFOGAIN_H_
