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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "eibo/acquisition.h"
#include "eibo/oracles.h"
#include "test_support.h"

using namespace eibo;
using namespace eibo::testing;

namespace {

const double kTauZero = 1.0 / std::sqrt(2.0 * std::numbers::pi);

Posterior OneObservation(double x, double y) {
  return Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{0.1}},
                        Dataset(Eigen::MatrixXd::Constant(1, 1, x),
                                Eigen::VectorXd::Constant(1, y), 0.01));
}

}  // namespace

TEST_CASE("tau examples") {
  CHECK(Tau(0.0) == doctest::Approx(kTauZero).epsilon(1e-15));
  CHECK(std::abs(Tau(10.0) - 10.0) < 1e-6);
  for (double z : {0.1, 1.0, 3.7, 8.0}) CHECK(std::abs(Tau(z) - Tau(-z) - z) < 1e-12);
}

TEST_CASE("tau agrees with the direct form where it is stable") {
  for (double z = -4.0; z <= 10.0; z += 0.01) {
    CHECK(Tau(z) == doctest::Approx(oracle::TauDirect(z)).epsilon(1e-12));
  }
}

TEST_CASE("tau is continuous across the tail switch") {
  const double below = Tau(std::nextafter(-4.0, -5.0));
  const double at = Tau(-4.0);
  CHECK(std::abs(below - at) / at < 1e-10);
}

TEST_CASE("tau stays positive and accurate deep in the tail") {
  double prev = 0.0;
  for (double z = -38.0; z <= -4.0; z += 0.5) {
    const double v = Tau(z);
    CHECK(v > 0.0);
    CHECK(v >= prev);
    // tau(z) ~ phi(z) / z^2 for z -> -inf.
    const double asym = NormalPdf(z) / (z * z);
    CHECK(v / asym == doctest::Approx(1.0).epsilon(0.1));
    prev = v;
  }
}

TEST_CASE("tau grid properties") {
  double prev = Tau(-10.0);
  for (int i = 1; i <= 20000; ++i) {
    const double z = -10.0 + 1e-3 * i;
    const double v = Tau(z);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v >= z - 1e-12);
    if (z > 0) CHECK(v <= 1.0 + z);
    prev = v;
  }
}

TEST_CASE("rescaled EI examples") {
  CHECK(EiRescaledValue(0.3, 1.0, 0.3, 1.0) == doctest::Approx(kTauZero).epsilon(1e-15));
  CHECK(EiRescaledValue(0.2, 0.0, 0.5, 1.0) == 0.0);
  CHECK(EiRescaledValue(0.7, 0.0, 0.5, 2.0) == doctest::Approx(0.2));
  CHECK(EiRescaledValue(-3.0, 1e-3, 0.0, 1.0) >= 0.0);
}

TEST_CASE("rescaled EI matches Monte Carlo") {
  Gen g(30);
  for (int n = 0; n < 5; ++n) {
    const double mean = Uniform(g, -1, 1), sd = Uniform(g, 0.05, 1), inc = Uniform(g, -1, 1),
                 nu = Uniform(g, 0.1, 2);
    const double mc = oracle::ExpectedImprovementMc(mean, sd, inc, nu, 1'000'000, g);
    CHECK(std::abs(EiRescaledValue(mean, sd, inc, nu) - mc) < 3e-3);
  }
}

TEST_CASE("rescaled EI is positive with variance and grows with nu below the incumbent") {
  Gen g(31);
  for (int n = 0; n < 200; ++n) {
    // Keeps the standardized gap above -20 at nu = 0.5, clear of underflow.
    const double sd = Uniform(g, 0.1, 1.0);
    const double mean = Uniform(g, -0.5, 0);
    const double inc = Uniform(g, 0, 0.5);
    CHECK(EiRescaledValue(mean, sd, inc, 0.5) > 0.0);
    double prev = 0.0;
    for (double nu = 0.05; nu < 5.0; nu *= 1.3) {
      const double v = EiRescaledValue(mean, sd, inc, nu);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("deterministic EI equals rescaled EI with nu = 1") {
  const Posterior p = OneObservation(0.4, 1.0);
  for (double x : {0.0, 0.35, 0.4, 0.5, 0.9}) {
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, x);
    CHECK(EiDeterministic(p, q, 0.8) == doctest::Approx(EiRescaled(p, q, 0.8, 1.0)).epsilon(1e-15));
  }
  const Posterior prior = Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{1.0}},
                                         Dataset::Empty(1, 0.1));
  CHECK(EiDeterministic(prior, Eigen::VectorXd::Zero(1), 0.0) ==
        doctest::Approx(kTauZero).epsilon(1e-15));
}

TEST_CASE("best posterior mean") {
  const Posterior prior = Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{1.0}},
                                         Dataset::Empty(1, 0.1));
  const Eigen::MatrixXd grid = MakeCandidates(Box::Unit(1), CandidateSpec{});
  const Incumbent a = BestPosteriorMean(prior, grid);
  CHECK(a.index == 0);
  CHECK(a.value == 0.0);

  const Incumbent single = BestPosteriorMean(prior, Eigen::MatrixXd::Constant(1, 1, 0.7));
  CHECK(single.point[0] == 0.7);

  CHECK_THROWS_AS(BestPosteriorMean(prior, Eigen::MatrixXd(0, 1)), std::invalid_argument);

  Gen g(32);
  const Eigen::MatrixXd x = RandomPoints(g, 10, 2);
  const Posterior p = Posterior::Fit({KernelFamily::kMatern52, LengthScales{0.2, 0.3}},
                                     Dataset(x, RandomVector(g, 10, -1, 1), 0.05));
  const Eigen::MatrixXd cands = RandomPoints(g, 300, 2);
  const Incumbent best = BestPosteriorMean(p, cands);
  Eigen::Index arg = 0;
  double top = -INFINITY;
  for (Eigen::Index i = 0; i < cands.rows(); ++i) {
    const double m = p.Mean(cands.row(i).transpose());
    if (m > top) top = m, arg = i;
  }
  CHECK(best.index == arg);
  CHECK(best.value == doctest::Approx(top).epsilon(1e-12));
}

TEST_CASE("candidate sets") {
  const Eigen::MatrixXd grid = MakeCandidates(Box::Unit(1), CandidateSpec{});
  CHECK(grid.rows() == 2001);
  CHECK(grid(0, 0) == 0.0);
  CHECK(grid(2000, 0) == 1.0);

  Box box;
  box.lower = Eigen::Vector3d(-1, 0, 2);
  box.upper = Eigen::Vector3d(1, 0.5, 3);
  const Eigen::MatrixXd a = MakeCandidates(box, CandidateSpec{});
  const Eigen::MatrixXd b = MakeCandidates(box, CandidateSpec{});
  CHECK(a.rows() == 4096);
  CHECK(a == b);
  for (Eigen::Index i = 0; i < a.rows(); ++i) CHECK(box.Contains(a.row(i).transpose()));
}

TEST_CASE("box validation") {
  Box bad;
  bad.lower = Eigen::Vector2d(0, 1);
  bad.upper = Eigen::Vector2d(1, 0.5);
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  Box mismatch;
  mismatch.lower = Eigen::Vector2d(0, 0);
  mismatch.upper = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(mismatch.Validate(), std::invalid_argument);
  const Box unit = Box::Unit(2);
  CHECK(unit.Clamp(Eigen::Vector2d(-0.5, 1.5)) == Eigen::Vector2d(0.0, 1.0));
}

TEST_CASE("maximizing on the prior returns the first candidate") {
  const Posterior prior = Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{0.2}},
                                         Dataset::Empty(1, 0.1));
  AcquisitionQuery q;
  q.posterior = &prior;
  q.domain = Box::Unit(1);
  q.candidates = MakeCandidates(q.domain, CandidateSpec{});
  const AcquisitionResult r = MaximizeAcquisition(q);
  CHECK(r.candidate_index == 0);
  CHECK(r.point[0] == 0.0);
  CHECK(r.value == doctest::Approx(kTauZero).epsilon(1e-15));
}

TEST_CASE("maximizer matches an exhaustive scan and leaves the observed point") {
  const Posterior p = OneObservation(0.5, 1.0);
  AcquisitionQuery q;
  q.posterior = &p;
  q.nu = 1.0;
  q.domain = Box::Unit(1);
  q.candidates = MakeCandidates(q.domain, CandidateSpec{});
  const AcquisitionResult r = MaximizeAcquisition(q);
  const Incumbent inc = BestPosteriorMean(p, q.candidates);
  CHECK(r.mu_plus == inc.value);
  double best = -1.0;
  Eigen::Index arg = 0;
  for (Eigen::Index i = 0; i < q.candidates.rows(); ++i) {
    const double v = EiRescaled(p, q.candidates.row(i).transpose(), inc.value, 1.0);
    if (v > best) best = v, arg = i;
  }
  CHECK(r.value == best);
  CHECK(r.candidate_index == arg);
  CHECK(r.point[0] != 0.5);
}

TEST_CASE("refinement in two dimensions never lowers the acquisition value") {
  Gen g(33);
  const Eigen::MatrixXd x = RandomPoints(g, 6, 2);
  const Posterior p = Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{0.2, 0.2}},
                                     Dataset(x, RandomVector(g, 6, -1, 1), 0.05));
  AcquisitionQuery q;
  q.posterior = &p;
  q.domain = Box::Unit(2);
  q.candidates = MakeCandidates(q.domain, CandidateSpec{});
  q.refine = false;
  const AcquisitionResult plain = MaximizeAcquisition(q);
  q.refine = true;
  const AcquisitionResult refined = MaximizeAcquisition(q);
  CHECK(refined.value >= plain.value);
  CHECK(q.domain.Contains(refined.point));
  CHECK(refined.mu_plus == plain.mu_plus);
}

TEST_CASE("acquisition query validation") {
  AcquisitionQuery q;
  q.domain = Box::Unit(1);
  q.candidates = Eigen::MatrixXd::Zero(3, 1);
  CHECK_THROWS_AS(MaximizeAcquisition(q), std::invalid_argument);
  const Posterior prior = Posterior::Fit({KernelFamily::kSquaredExponential, LengthScales{0.2}},
                                         Dataset::Empty(1, 0.1));
  q.posterior = &prior;
  q.nu = 0.0;
  CHECK_THROWS_AS(MaximizeAcquisition(q), std::invalid_argument);
  q.nu = 1.0;
  q.candidates = Eigen::MatrixXd(0, 1);
  CHECK_THROWS_AS(MaximizeAcquisition(q), std::invalid_argument);
}
