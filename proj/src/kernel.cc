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

#include "eibo/kernel.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eibo {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964091736687313;

void CheckDim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

std::string_view ToString(KernelFamily family) {
  switch (family) {
    case KernelFamily::kSquaredExponential:
      return "se";
    case KernelFamily::kMatern52:
      return "matern52";
  }
  return "unknown";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  if (name == "se" || name == "squared_exponential") {
    return KernelFamily::kSquaredExponential;
  }
  if (name == "matern52") return KernelFamily::kMatern52;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) +
                              "' (expected se or matern52)");
}

LengthScales::LengthScales(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 1) {
    throw std::invalid_argument("length scales: need at least one dimension");
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
      throw std::invalid_argument(
          "length scales: entry " + std::to_string(i) +
          " must be finite and > 0");
    }
  }
}

LengthScales::LengthScales(std::initializer_list<double> values)
    : LengthScales(Eigen::Map<const Eigen::VectorXd>(
          values.begin(), static_cast<Eigen::Index>(values.size()))) {}

LengthScales LengthScales::Constant(int dim, double value) {
  return LengthScales(Eigen::VectorXd::Constant(dim, value));
}

bool LengthScales::AllLessEqual(const LengthScales& other) const {
  CheckDim(dim(), other.dim(), "length scales");
  return (values_.array() <= other.values_.array()).all();
}

double ScaledDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      const LengthScales& theta) {
  CheckDim(a.size(), theta.dim(), "scaled distance");
  CheckDim(b.size(), theta.dim(), "scaled distance");
  double sum = 0.0;
  for (int i = 0; i < theta.dim(); ++i) {
    const double z = (a[i] - b[i]) / theta[i];
    sum += z * z;
  }
  return std::sqrt(sum);
}

double KernelProfile(KernelFamily family, double r) {
  switch (family) {
    case KernelFamily::kSquaredExponential:
      return std::exp(-0.5 * r * r);
    case KernelFamily::kMatern52: {
      const double s = kSqrt5 * r;
      return std::exp(-s) * (1.0 + s + (5.0 / 3.0) * r * r);
    }
  }
  return 0.0;
}

double KernelEval(const KernelSpec& spec,
                  const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  return KernelProfile(spec.family, ScaledDistance(a, b, spec.lengthscales));
}

Eigen::MatrixXd KernelMatrix(const KernelSpec& spec, const Eigen::MatrixXd& x) {
  CheckDim(x.cols(), spec.dim(), "kernel matrix");
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = KernelEval(spec, x.row(i).transpose(), x.row(j).transpose());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd CrossKernel(const KernelSpec& spec, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& b) {
  CheckDim(a.cols(), spec.dim(), "cross kernel");
  CheckDim(b.cols(), spec.dim(), "cross kernel");
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = KernelEval(spec, a.row(i).transpose(), b.row(j).transpose());
    }
  }
  return k;
}

Eigen::VectorXd KernelVector(const KernelSpec& spec, const Eigen::MatrixXd& x,
                             const Eigen::Ref<const Eigen::VectorXd>& z) {
  CheckDim(x.cols(), spec.dim(), "kernel vector");
  CheckDim(z.size(), spec.dim(), "kernel vector");
  Eigen::VectorXd k(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    k[i] = KernelEval(spec, x.row(i).transpose(), z);
  }
  return k;
}

}  // namespace eibo
