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

#ifndef EIBO_ACQUISITION_H_
#define EIBO_ACQUISITION_H_

#include <cstdint>

#include <Eigen/Dense>

#include "eibo/gp.h"

namespace eibo {

double NormalPdf(double z);
double NormalCdf(double z);

/// tau(z) = z Phi(z) + phi(z), the standardized expected-improvement
/// kernel. Non-negative, non-decreasing, tau(z) = z + tau(-z). The lower
/// tail is evaluated through a continued fraction so it stays accurate
/// where the direct form cancels.
double Tau(double z);

/// Axis-aligned box domain.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static Box Unit(int dim);

  int dim() const { return static_cast<int>(lower.size()); }
  bool Contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd Clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  void Validate() const;
};

struct CandidateSpec {
  int grid_points_1d = 2001;
  int lowdiscrepancy_points = 4096;
  int refine_starts = 8;
  int refine_iterations = 30;
  std::uint64_t scramble_seed = 0x9e3779b97f4a7c15ULL;
};

// d = 1: uniform grid including both endpoints. d >= 2: Halton points
// with a seeded Cranley-Patterson rotation, mapped into the box.
Eigen::MatrixXd MakeCandidates(const Box& domain, const CandidateSpec& spec);

enum class IncumbentMode { kBestPosteriorMean, kBestObservedF };

struct Incumbent {
  Eigen::VectorXd point;
  double value = 0.0;
  Eigen::Index index = 0;
};

/// argmax / max of the posterior mean over the rows of `candidates`. Ties
/// go to the lowest index.
Incumbent BestPosteriorMean(const Posterior& posterior,
                            const Eigen::MatrixXd& candidates);

/// nu * s * tau((m - mu_plus) / (nu * s)) for a posterior with mean m and
/// standard deviation s; max(0, m - mu_plus) when s = 0.
double EiRescaledValue(double mean, double stddev, double mu_plus, double nu);

double EiRescaled(const Posterior& posterior,
                  const Eigen::Ref<const Eigen::VectorXd>& x, double mu_plus,
                  double nu);

// s * tau((m - f_best) / s), zero when s = 0.
double EiDeterministic(const Posterior& posterior,
                       const Eigen::Ref<const Eigen::VectorXd>& x,
                       double f_best);

struct AcquisitionQuery {
  const Posterior* posterior = nullptr;
  double nu = 1.0;
  IncumbentMode incumbent_mode = IncumbentMode::kBestPosteriorMean;
  Eigen::MatrixXd candidates;  // rows inside `domain`
  Box domain;
  // Coordinate-wise ternary refinement from the best candidates. Only
  // applied for d >= 2.
  bool refine = true;
  CandidateSpec refinement;
};

struct AcquisitionResult {
  Eigen::VectorXd point;
  double value = 0.0;
  double mu_plus = 0.0;  // incumbent used for the whole scan
  Eigen::Index candidate_index = 0;
  bool refined = false;
};

AcquisitionResult MaximizeAcquisition(const AcquisitionQuery& query);

}  // namespace eibo

#endif  // EIBO_ACQUISITION_H_
