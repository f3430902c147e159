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

#ifndef EIBO_KERNEL_H_
#define EIBO_KERNEL_H_

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace eibo {

enum class KernelFamily { kSquaredExponential, kMatern52 };

std::string_view ToString(KernelFamily family);

// Accepts "se", "squared_exponential", "matern52" (case-sensitive).
// Throws std::invalid_argument otherwise.
KernelFamily ParseKernelFamily(std::string_view name);

/// Per-dimension ARD length scales. Every entry is finite and strictly
/// positive; the dimension is at least one.
class LengthScales {
 public:
  explicit LengthScales(Eigen::VectorXd values);
  LengthScales(std::initializer_list<double> values);

  static LengthScales Constant(int dim, double value);

  int dim() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const Eigen::VectorXd& values() const { return values_; }

  // Componentwise comparisons.
  bool AllLessEqual(const LengthScales& other) const;

  friend bool operator==(const LengthScales& a, const LengthScales& b) {
    return a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

/// Stationary ARD covariance with unit signal variance, k(x, x) = 1.
struct KernelSpec {
  KernelFamily family;
  LengthScales lengthscales;

  int dim() const { return lengthscales.dim(); }
};

/// Mahalanobis distance sqrt(sum_i ((a_i - b_i) / theta_i)^2).
double ScaledDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      const LengthScales& theta);

/// Kernel value as a function of the scaled distance r.
double KernelProfile(KernelFamily family, double r);

double KernelEval(const KernelSpec& spec,
                  const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b);

// Points are rows of `x`. The diagonal is exactly one and the result is
// exactly symmetric (the upper triangle is mirrored).
Eigen::MatrixXd KernelMatrix(const KernelSpec& spec, const Eigen::MatrixXd& x);

// Cross covariance, entry (i, j) = k(a_i, b_j).
Eigen::MatrixXd CrossKernel(const KernelSpec& spec, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& b);

// k(x_i, z) for every row x_i of `x`.
Eigen::VectorXd KernelVector(const KernelSpec& spec, const Eigen::MatrixXd& x,
                             const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace eibo

#endif  // EIBO_KERNEL_H_
