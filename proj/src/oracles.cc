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

#include "eibo/oracles.h"

#include <cmath>
#include <numbers>

namespace eibo::oracle {

double Kernel(KernelFamily family, const Eigen::VectorXd& theta,
              const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd diff = a - b;
  const Eigen::MatrixXd inv_scale = theta.array().square().inverse().matrix().asDiagonal();
  const double quad = diff.transpose() * inv_scale * diff;
  if (family == KernelFamily::kSquaredExponential) return std::exp(-0.5 * quad);
  const double r = std::sqrt(quad);
  return std::exp(-std::sqrt(5.0) * r) * (1.0 + std::sqrt(5.0) * r + 5.0 / 3.0 * quad);
}

Eigen::MatrixXd Gram(KernelFamily family, const Eigen::VectorXd& theta,
                     const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = Kernel(family, theta, a.row(i).transpose(), b.row(j).transpose());
    }
  }
  return k;
}

DensePosterior Posterior(KernelFamily family, const Eigen::VectorXd& theta,
                         const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         double sigma, const Eigen::MatrixXd& query) {
  DensePosterior out;
  const Eigen::MatrixXd kqq = Gram(family, theta, query, query);
  if (x.rows() == 0) {
    out.mean = Eigen::VectorXd::Zero(query.rows());
    out.cov = kqq;
    return out;
  }
  Eigen::MatrixXd a = Gram(family, theta, x, x);
  a.diagonal().array() += sigma * sigma;
  const Eigen::MatrixXd inv = a.fullPivLu().inverse();
  const Eigen::MatrixXd kxq = Gram(family, theta, x, query);
  out.mean = kxq.transpose() * inv * y;
  out.cov = kqq - kxq.transpose() * inv * kxq;
  return out;
}

double InfoGain(KernelFamily family, const Eigen::VectorXd& theta,
                const Eigen::MatrixXd& x, double sigma) {
  const Eigen::MatrixXd k = Gram(family, theta, x, x);
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues();
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    total += std::log1p(std::max(0.0, eig[i]) / (sigma * sigma));
  }
  return 0.5 * total;
}

double QuadraticForm(const Eigen::MatrixXd& k, const Eigen::VectorXd& f) {
  return f.dot(k.fullPivLu().solve(f));
}

double ExpectedImprovementMc(double mean, double sd, double incumbent, double nu,
                             int samples, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  double total = 0.0;
  for (int i = 0; i < samples; ++i) {
    total += std::max(0.0, mean + nu * sd * z(rng) - incumbent);
  }
  return total / samples;
}

double TauDirect(double z) {
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return z * cdf + pdf;
}

}  // namespace eibo::oracle
