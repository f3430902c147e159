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

#ifndef EIBO_ORACLES_H_
#define EIBO_ORACLES_H_

#include <random>

#include <Eigen/Dense>

#include "eibo/kernel.h"

// Textbook reference computations used to cross-check the library. They
// favour directness over speed: explicit inverses, eigenvalue log-dets and
// plain Monte Carlo. None of them shares code with the factorized paths.
namespace eibo::oracle {

/// Kernel value from the quadratic form (x - x')^T diag(theta^2)^-1 (x - x').
double Kernel(KernelFamily family, const Eigen::VectorXd& theta,
              const Eigen::VectorXd& a, const Eigen::VectorXd& b);

Eigen::MatrixXd Gram(KernelFamily family, const Eigen::VectorXd& theta,
                     const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct DensePosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Posterior mean and covariance at the rows of `query` through the
/// explicit inverse of K + sigma^2 I.
DensePosterior Posterior(KernelFamily family, const Eigen::VectorXd& theta,
                         const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         double sigma, const Eigen::MatrixXd& query);

/// 1/2 sum log(1 + lambda_i / sigma^2) over the eigenvalues of K.
double InfoGain(KernelFamily family, const Eigen::VectorXd& theta,
                const Eigen::MatrixXd& x, double sigma);

/// f^T K^-1 f with a full-pivoting LU solve.
double QuadraticForm(const Eigen::MatrixXd& k, const Eigen::VectorXd& f);

/// Sample mean of max(0, mean + nu * sd * Z - incumbent) over `samples`
/// standard normal draws.
double ExpectedImprovementMc(double mean, double sd, double incumbent, double nu,
                             int samples, std::mt19937_64& rng);

/// z Phi(z) + phi(z) by direct evaluation.
double TauDirect(double z);

}  // namespace eibo::oracle

#endif  // EIBO_ORACLES_H_
