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

#include "eibo/gp.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace eibo {

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, double sigma)
    : inputs(std::move(x)), outputs(std::move(y)), noise_std(sigma) {
  Validate();
}

Dataset Dataset::Empty(int dim, double sigma) {
  return Dataset(Eigen::MatrixXd(0, dim), Eigen::VectorXd(0), sigma);
}

void Dataset::Append(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  if (x.size() != inputs.cols()) {
    throw std::invalid_argument("dataset: appended point has wrong dimension");
  }
  const Eigen::Index n = inputs.rows();
  inputs.conservativeResize(n + 1, Eigen::NoChange);
  inputs.row(n) = x.transpose();
  outputs.conservativeResize(n + 1);
  outputs[n] = y;
}

void Dataset::Validate() const {
  if (inputs.rows() != outputs.size()) {
    throw std::invalid_argument("dataset: " + std::to_string(inputs.rows()) +
                                " inputs but " +
                                std::to_string(outputs.size()) + " outputs");
  }
  if (!std::isfinite(noise_std) || noise_std <= 0.0) {
    throw std::invalid_argument("dataset: noise_std must be finite and > 0");
  }
  if (inputs.cols() < 1) {
    throw std::invalid_argument("dataset: inputs need at least one column");
  }
}

JitteredCholesky JitteredCholesky::Compute(const Eigen::MatrixXd& a,
                                           std::span<const double> ladder) {
  std::vector<double> tried;
  const Eigen::Index n = a.rows();
  for (double jitter : ladder) {
    tried.push_back(jitter);
    Eigen::MatrixXd m = a;
    m.diagonal().array() += jitter;
    JitteredCholesky out;
    out.llt.compute(m);
    if (out.llt.info() != Eigen::Success) continue;
    const auto diag = out.llt.matrixLLT().diagonal();
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(diag[i]) || diag[i] <= 0.0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    out.jitter = jitter;
    return out;
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed for a " << n << "x" << n
      << " matrix after jitter levels";
  for (double j : tried) msg << ' ' << j;
  throw NumericalError(msg.str(), std::move(tried));
}

double JitteredCholesky::LogDet() const {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Posterior Posterior::Fit(KernelSpec spec, Dataset data) {
  data.Validate();
  if (data.dim() != spec.dim()) {
    throw std::invalid_argument("posterior: data dimension " +
                                std::to_string(data.dim()) +
                                " does not match kernel dimension " +
                                std::to_string(spec.dim()));
  }
  Posterior p(std::move(spec), std::move(data));
  const int n = p.data_.size();
  if (n == 0) {
    p.lower_.resize(0, 0);
    p.alpha_.resize(0);
    return p;
  }
  Eigen::MatrixXd k = KernelMatrix(p.spec_, p.data_.inputs);
  k.diagonal().array() += p.data_.noise_std * p.data_.noise_std;
  JitteredCholesky chol = JitteredCholesky::Compute(k);
  p.jitter_ = chol.jitter;
  p.lower_ = chol.llt.matrixL();
  p.alpha_ = chol.llt.solve(p.data_.outputs);
  return p;
}

double Posterior::Mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != spec_.dim()) {
    throw std::invalid_argument("posterior mean: dimension mismatch");
  }
  if (size() == 0) return 0.0;
  return KernelVector(spec_, data_.inputs, x).dot(alpha_);
}

double Posterior::Covariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& x2) const {
  const double prior = KernelEval(spec_, x, x2);
  if (size() == 0) return prior;
  const Eigen::VectorXd v1 =
      lower_.triangularView<Eigen::Lower>().solve(KernelVector(spec_, data_.inputs, x));
  const Eigen::VectorXd v2 =
      lower_.triangularView<Eigen::Lower>().solve(KernelVector(spec_, data_.inputs, x2));
  return prior - v1.dot(v2);
}

double Posterior::ClampVariance(double v) const {
  if (v >= 0.0) return v;
  if (v >= kNegativeVarianceTolerance) return 0.0;
  throw NumericalError("posterior variance " + std::to_string(v) +
                       " is negative beyond tolerance");
}

double Posterior::Variance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != spec_.dim()) {
    throw std::invalid_argument("posterior variance: dimension mismatch");
  }
  if (size() == 0) return 1.0;
  const Eigen::VectorXd v =
      lower_.triangularView<Eigen::Lower>().solve(KernelVector(spec_, data_.inputs, x));
  return ClampVariance(1.0 - v.squaredNorm());
}

void Posterior::MeanAndVariance(const Eigen::MatrixXd& x, Eigen::VectorXd* mean,
                                Eigen::VectorXd* variance) const {
  if (x.cols() != spec_.dim()) {
    throw std::invalid_argument("posterior batch query: dimension mismatch");
  }
  const Eigen::Index m = x.rows();
  if (size() == 0) {
    if (mean) *mean = Eigen::VectorXd::Zero(m);
    if (variance) *variance = Eigen::VectorXd::Ones(m);
    return;
  }
  const Eigen::MatrixXd cross = CrossKernel(spec_, data_.inputs, x);  // n x m
  if (mean) *mean = cross.transpose() * alpha_;
  if (variance) {
    const Eigen::MatrixXd v = lower_.triangularView<Eigen::Lower>().solve(cross);
    variance->resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      (*variance)[j] = ClampVariance(1.0 - v.col(j).squaredNorm());
    }
  }
}

double Posterior::DataFit() const {
  if (size() == 0) return 0.0;
  return data_.outputs.dot(alpha_);
}

double Posterior::LogDet() const {
  if (size() == 0) return 0.0;
  return 2.0 * lower_.diagonal().array().log().sum();
}

double LogMarginalLikelihood(const KernelSpec& spec, const Dataset& data) {
  if (data.size() < 1) {
    throw std::invalid_argument("log marginal likelihood: need t >= 1");
  }
  const Posterior p = Posterior::Fit(spec, data);
  return -0.5 * p.DataFit() - 0.5 * p.LogDet() -
         0.5 * data.size() * std::log(2.0 * std::numbers::pi);
}

}  // namespace eibo
