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

#ifndef EIBO_GP_H_
#define EIBO_GP_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eibo/errors.h"
#include "eibo/kernel.h"

namespace eibo {

/// Observed inputs (rows of `inputs`), noisy outputs and the noise scale.
struct Dataset {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd outputs;
  double noise_std = 1.0;

  Dataset() = default;
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, double sigma);

  // Empty dataset of dimension `dim`.
  static Dataset Empty(int dim, double sigma);

  int size() const { return static_cast<int>(outputs.size()); }
  int dim() const { return static_cast<int>(inputs.cols()); }

  void Append(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

  // Throws std::invalid_argument when the invariants do not hold.
  void Validate() const;
};

/// Diagonal jitter ladder tried in order when factorizing K + sigma^2 I.
inline constexpr double kJitterLadder[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6};

// Below this, a computed posterior variance is a numerical failure rather
// than round-off to clamp.
inline constexpr double kNegativeVarianceTolerance = -1e-8;

/// Cholesky factor of a symmetric matrix with jitter escalation. Throws
/// NumericalError listing the tried jitter levels if every level fails.
struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;

  static JitteredCholesky Compute(const Eigen::MatrixXd& a,
                                  std::span<const double> ladder = kJitterLadder);

  // log det of the (jittered) matrix.
  double LogDet() const;
};

/// Exact GP posterior with zero prior mean. Immutable after Fit; read
/// queries are safe to run concurrently.
class Posterior {
 public:
  // t = 0 is allowed and yields the prior.
  static Posterior Fit(KernelSpec spec, Dataset data);

  const KernelSpec& spec() const { return spec_; }
  const Dataset& data() const { return data_; }
  double jitter() const { return jitter_; }
  int size() const { return data_.size(); }

  double Mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double Covariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& x2) const;
  // Clamped at zero within kNegativeVarianceTolerance; NumericalError below it.
  double Variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Batched mean and variance over the rows of `x`.
  void MeanAndVariance(const Eigen::MatrixXd& x, Eigen::VectorXd* mean,
                       Eigen::VectorXd* variance) const;

  // y^T (K + sigma^2 I)^{-1} y.
  double DataFit() const;
  // log det (K + sigma^2 I).
  double LogDet() const;

 private:
  Posterior(KernelSpec spec, Dataset data) : spec_(std::move(spec)), data_(std::move(data)) {}

  double ClampVariance(double v) const;

  KernelSpec spec_;
  Dataset data_;
  Eigen::MatrixXd lower_;  // L with L L^T = K + (sigma^2 + jitter) I
  Eigen::VectorXd alpha_;  // (K + sigma^2 I)^{-1} y
  double jitter_ = 0.0;
};

/// -1/2 y^T (K+s^2 I)^{-1} y - 1/2 log det(K+s^2 I) - t/2 log(2 pi).
double LogMarginalLikelihood(const KernelSpec& spec, const Dataset& data);

}  // namespace eibo

#endif  // EIBO_GP_H_
