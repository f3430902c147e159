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

#include "eibo/acquisition.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace eibo {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

constexpr int kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double RadicalInverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

double NormalPdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double Tau(double z) {
  if (z >= -4.0) return z * NormalCdf(z) + NormalPdf(z);
  // Lower tail: with x = -z and Mills ratio R(x) = 1 / f0 where
  // f_{k-1} = x + k / f_k, tau(z) = phi(z) * R(x) / f1.
  const double x = -z;
  double f = x;
  for (int k = 80; k >= 2; --k) f = x + k / f;
  const double f1 = f;
  const double f0 = x + 1.0 / f1;
  return NormalPdf(z) / (f0 * f1);
}

Box Box::Unit(int dim) {
  return Box{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

bool Box::Contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Eigen::VectorXd Box::Clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

void Box::Validate() const {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw std::invalid_argument("domain: lower/upper must have equal, nonzero size");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) ||
        !(lower[i] < upper[i])) {
      throw std::invalid_argument("domain: need finite lower < upper in every dimension");
    }
  }
}

Eigen::MatrixXd MakeCandidates(const Box& domain, const CandidateSpec& spec) {
  domain.Validate();
  const int d = domain.dim();
  if (d == 1) {
    const int n = spec.grid_points_1d;
    if (n < 2) throw std::invalid_argument("candidates: need at least 2 grid points");
    Eigen::MatrixXd c(n, 1);
    const double lo = domain.lower[0];
    const double hi = domain.upper[0];
    for (int i = 0; i < n; ++i) {
      c(i, 0) = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    }
    return c;
  }
  if (d > static_cast<int>(std::size(kHaltonPrimes))) {
    throw std::invalid_argument("candidates: dimension too large for Halton set");
  }
  const int n = spec.lowdiscrepancy_points;
  if (n < 1) throw std::invalid_argument("candidates: need at least one point");
  std::mt19937_64 rng(spec.scramble_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd shift(d);
  for (int j = 0; j < d; ++j) shift[j] = unif(rng);
  Eigen::MatrixXd c(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      double u = RadicalInverse(static_cast<std::uint64_t>(i) + 1, kHaltonPrimes[j]) + shift[j];
      u -= std::floor(u);
      c(i, j) = domain.lower[j] + (domain.upper[j] - domain.lower[j]) * u;
    }
  }
  return c;
}

Incumbent BestPosteriorMean(const Posterior& posterior,
                            const Eigen::MatrixXd& candidates) {
  if (candidates.rows() == 0) {
    throw std::invalid_argument("best posterior mean: empty candidate set");
  }
  Eigen::VectorXd mean;
  posterior.MeanAndVariance(candidates, &mean, nullptr);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < mean.size(); ++i) {
    if (mean[i] > mean[best]) best = i;
  }
  return Incumbent{candidates.row(best).transpose(), mean[best], best};
}

double EiRescaledValue(double mean, double stddev, double mu_plus, double nu) {
  if (!(stddev > 0.0)) return std::max(0.0, mean - mu_plus);
  const double scale = nu * stddev;
  return scale * Tau((mean - mu_plus) / scale);
}

double EiRescaled(const Posterior& posterior,
                  const Eigen::Ref<const Eigen::VectorXd>& x, double mu_plus,
                  double nu) {
  return EiRescaledValue(posterior.Mean(x), std::sqrt(posterior.Variance(x)),
                         mu_plus, nu);
}

double EiDeterministic(const Posterior& posterior,
                       const Eigen::Ref<const Eigen::VectorXd>& x,
                       double f_best) {
  const double s = std::sqrt(posterior.Variance(x));
  if (!(s > 0.0)) return 0.0;
  return s * Tau((posterior.Mean(x) - f_best) / s);
}

namespace {

double EiAt(const Posterior& p, const Eigen::VectorXd& x, double mu_plus,
            double nu) {
  return EiRescaled(p, x, mu_plus, nu);
}

// Coordinate-wise ternary search inside [start - half_width, start + half_width]
// intersected with the domain. Returns the best point seen.
Eigen::VectorXd RefineCoordinatewise(const Posterior& p, const Box& domain,
                                     Eigen::VectorXd start, double mu_plus,
                                     double nu, const Eigen::VectorXd& half_width,
                                     int iterations, double* best_value) {
  Eigen::VectorXd x = std::move(start);
  double fx = EiAt(p, x, mu_plus, nu);
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int j = 0; j < x.size(); ++j) {
      double lo = std::max(domain.lower[j], x[j] - half_width[j]);
      double hi = std::min(domain.upper[j], x[j] + half_width[j]);
      Eigen::VectorXd probe = x;
      for (int it = 0; it < iterations; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        probe[j] = m1;
        const double f1 = EiAt(p, probe, mu_plus, nu);
        probe[j] = m2;
        const double f2 = EiAt(p, probe, mu_plus, nu);
        if (f1 < f2) {
          lo = m1;
        } else {
          hi = m2;
        }
      }
      probe[j] = 0.5 * (lo + hi);
      const double fp = EiAt(p, probe, mu_plus, nu);
      if (fp > fx) {
        x = probe;
        fx = fp;
      }
    }
  }
  *best_value = fx;
  return x;
}

}  // namespace

AcquisitionResult MaximizeAcquisition(const AcquisitionQuery& query) {
  if (query.posterior == nullptr) {
    throw std::invalid_argument("acquisition: query has no posterior");
  }
  if (!std::isfinite(query.nu) || query.nu <= 0.0) {
    throw std::invalid_argument("acquisition: nu must be finite and > 0");
  }
  const Eigen::MatrixXd& cand = query.candidates;
  if (cand.rows() == 0) {
    throw std::invalid_argument("acquisition: empty candidate set");
  }
  const Posterior& p = *query.posterior;

  Eigen::VectorXd mean, var;
  p.MeanAndVariance(cand, &mean, &var);

  double mu_plus = 0.0;
  if (query.incumbent_mode == IncumbentMode::kBestObservedF && p.size() > 0) {
    mu_plus = p.data().outputs.maxCoeff();
  } else {
    mu_plus = mean.maxCoeff();
  }

  Eigen::VectorXd ei(cand.rows());
  for (Eigen::Index i = 0; i < cand.rows(); ++i) {
    ei[i] = EiRescaledValue(mean[i], std::sqrt(var[i]), mu_plus, query.nu);
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ei.size(); ++i) {
    if (ei[i] > ei[best]) best = i;
  }

  AcquisitionResult result;
  result.point = cand.row(best).transpose();
  result.value = ei[best];
  result.mu_plus = mu_plus;
  result.candidate_index = best;

  const int d = static_cast<int>(cand.cols());
  if (!query.refine || d < 2 || query.refinement.refine_starts < 1) return result;

  std::vector<Eigen::Index> order(cand.rows());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto starts = std::min<std::size_t>(order.size(), query.refinement.refine_starts);
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      return ei[a] > ei[b] || (ei[a] == ei[b] && a < b);
                    });
  const double cells = std::pow(static_cast<double>(cand.rows()), 1.0 / d);
  const Eigen::VectorXd half_width = (query.domain.upper - query.domain.lower) / cells;
  for (std::size_t s = 0; s < starts; ++s) {
    double value = 0.0;
    Eigen::VectorXd x = RefineCoordinatewise(
        p, query.domain, cand.row(order[s]).transpose(), mu_plus, query.nu,
        half_width, query.refinement.refine_iterations, &value);
    if (value > result.value) {
      result.value = value;
      result.point = std::move(x);
      result.candidate_index = order[s];
      result.refined = true;
    }
  }
  return result;
}

}  // namespace eibo
