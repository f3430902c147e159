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

#ifndef EIBO_HYPERCONTROL_H_
#define EIBO_HYPERCONTROL_H_

#include "eibo/gp.h"
#include "eibo/kernel.h"

namespace eibo {

/// Componentwise 0 < lower_i <= upper_i.
struct HyperBounds {
  LengthScales lower;
  LengthScales upper;

  void Validate() const;
  bool Contains(const LengthScales& theta) const;
  LengthScales Clamp(const LengthScales& theta) const;
  // Componentwise sqrt(lower_i * upper_i).
  LengthScales GeometricMidpoint() const;
  // prod_i upper_i / lower_i.
  double VolumeRatio() const;
};

/// Controller constants. Defaults: t_sigma = 1, p = 0.5, c1 = 0.001, c2 = 1.
struct ControllerConfig {
  double t_sigma = 1.0;
  double p = 0.5;
  double c1 = 0.001;
  double c2 = 1.0;
  int e_threshold = 5;
  double delta = 0.1;

  // Throws std::invalid_argument naming the violated constraint.
  void Validate() const;
};

struct HyperState {
  HyperBounds bounds;
  LengthScales theta;
  double nu = 1.0;
  int e_counter = 0;
  int shrink_events = 0;
};

/// E <- E + 1 when var_at_selected < t_sigma * sigma^2, else E <- 0.
HyperState UpdateConfidenceCounter(HyperState state, double var_at_selected,
                                   double sigma, const ControllerConfig& cfg);

/// upper_i <- max(min(p * max_j upper_j, upper_i), lower_i).
HyperBounds ShrinkUpperBounds(const HyperBounds& bounds, double p);

struct ThetaSearchOptions {
  int seeds_per_dim = 16;
  int max_seeds = 64;
  int golden_iterations = 20;
};

/// Constrained maximum-likelihood length scales: stratified log-space
/// starts refined by per-coordinate golden-section search. Returns the
/// geometric midpoint when the dataset is empty. Probes whose
/// factorization fails are skipped; NumericalError only if all fail.
LengthScales EstimateThetaConstrained(const Dataset& data,
                                      const HyperBounds& bounds,
                                      KernelFamily family,
                                      const ThetaSearchOptions& options = {});

/// sqrt(y^T (K + sigma^2 I)^{-1} y / t), the ML amplitude of the data under
/// a unit-variance kernel. Zero for an empty dataset.
double SignalScaleEstimate(const Dataset& data, const KernelSpec& spec);

/// Clamp `estimate` into [c1 * xi, c2 * xi].
double ClampNu(double estimate, double xi, const ControllerConfig& cfg);

/// nu for the next round: the ML signal scale clamped into
/// [c1 * xi, c2 * xi]; falls back to `previous_nu` when there is no data.
double ChooseNu(double xi, double previous_nu, const Dataset& data,
                const KernelSpec& spec, const ControllerConfig& cfg);

}  // namespace eibo

#endif  // EIBO_HYPERCONTROL_H_
