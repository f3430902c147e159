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
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "eibo/hypercontrol.h"
#include "eibo/infogain.h"
#include "test_support.h"

using namespace eibo;
using namespace eibo::testing;

namespace {

HyperState StateWithCounter(int e) {
  HyperState s{HyperBounds{LengthScales{0.01}, LengthScales{1.0}}, LengthScales{0.1}};
  s.e_counter = e;
  return s;
}

// Samples a draw from the GP prior with SE length scale 0.2 at `n` uniform
// points, plus observation noise.
Dataset SampleSe(Gen& g, int n, double theta, double sigma) {
  const Eigen::MatrixXd x = RandomPoints(g, n, 1);
  Eigen::MatrixXd k = KernelMatrix({KernelFamily::kSquaredExponential, LengthScales{theta}}, x);
  k.diagonal().array() += 1e-10;
  const Eigen::MatrixXd chol = k.llt().matrixL();
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::VectorXd w(n), noise(n);
  for (int i = 0; i < n; ++i) w[i] = z(g), noise[i] = sigma * z(g);
  return Dataset(x, chol * w + noise, sigma);
}

}  // namespace

TEST_CASE("controller defaults and validation") {
  const ControllerConfig cfg;
  CHECK(cfg.t_sigma == 1.0);
  CHECK(cfg.p == 0.5);
  CHECK(cfg.c1 == 0.001);
  CHECK(cfg.c2 == 1.0);
  CHECK(cfg.e_threshold == 5);
  CHECK_NOTHROW(cfg.Validate());

  ControllerConfig bad = cfg;
  bad.c1 = 2.0;
  try {
    bad.Validate();
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("c2 > c1 > 0") != std::string::npos);
  }
  bad = cfg;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = cfg;
  bad.t_sigma = 0.0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = cfg;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = cfg;
  bad.e_threshold = 0;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}

TEST_CASE("confidence counter") {
  const ControllerConfig cfg;
  CHECK(UpdateConfidenceCounter(StateWithCounter(2), 0.5, 1.0, cfg).e_counter == 3);
  CHECK(UpdateConfidenceCounter(StateWithCounter(4), 2.0, 1.0, cfg).e_counter == 0);
  CHECK(UpdateConfidenceCounter(StateWithCounter(3), 1.0, 1.0, cfg).e_counter == 0);
  CHECK(UpdateConfidenceCounter(StateWithCounter(0), 0.99e-4, 0.01, cfg).e_counter == 1);
  CHECK(UpdateConfidenceCounter(StateWithCounter(0), 1.01e-4, 0.01, cfg).e_counter == 0);
  ControllerConfig loose = cfg;
  loose.t_sigma = 3.0;
  CHECK(UpdateConfidenceCounter(StateWithCounter(1), 2.0, 1.0, loose).e_counter == 2);
}

TEST_CASE("shrink examples") {
  const HyperBounds a{LengthScales{0.01, 0.01}, LengthScales{1.0, 0.5}};
  const HyperBounds sa = ShrinkUpperBounds(a, 0.5);
  CHECK(sa.upper.values()[0] == 0.5);
  CHECK(sa.upper.values()[1] == 0.5);
  CHECK(sa.lower.values() == a.lower.values());

  const HyperBounds b{LengthScales{0.05}, LengthScales{0.06}};
  CHECK(ShrinkUpperBounds(b, 0.5).upper.values()[0] == 0.05);

  const HyperBounds c{LengthScales{0.2, 0.3}, LengthScales{0.2, 0.3}};
  const HyperBounds sc = ShrinkUpperBounds(c, 0.5);
  CHECK(sc.upper.values() == c.upper.values());
}

TEST_CASE("repeated shrinking is monotone and settles within the event bound") {
  Gen g(50);
  for (int n = 0; n < 200; ++n) {
    const int d = UniformInt(g, 1, 4);
    Eigen::VectorXd lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
      lo[j] = LogUniform(g, 1e-3, 0.5);
      hi[j] = lo[j] * LogUniform(g, 1.0, 1e3);
    }
    const double p = Uniform(g, 0.1, 0.9);
    HyperBounds b{LengthScales(lo), LengthScales(hi)};
    const double bound = std::ceil(std::log(lo.minCoeff() / hi.maxCoeff()) / std::log(p));
    int events = 0;
    for (;;) {
      const HyperBounds next = ShrinkUpperBounds(b, p);
      CHECK((next.upper.values().array() <= b.upper.values().array()).all());
      CHECK((next.upper.values().array() >= next.lower.values().array()).all());
      CHECK(next.lower.values() == b.lower.values());
      if (next.upper == b.upper) break;
      b = next;
      ++events;
      REQUIRE(events <= bound + 1);
    }
    CHECK(events <= std::max(bound, 0.0));
    // Each upper bound stalls at max(lower_i, p * max_j lower_j) at worst, so
    // it reaches its lower bound whenever p * max lower <= that lower bound.
    for (int j = 0; j < d; ++j) {
      const double floor = std::max(lo[j], std::min(hi[j], p * lo.maxCoeff()));
      CHECK(b.upper.values()[j] <= floor * (1 + 1e-15));
      if (p * lo.maxCoeff() <= lo[j]) CHECK(b.upper.values()[j] == lo[j]);
    }
  }
}

TEST_CASE("equal lower bounds are reached") {
  HyperBounds b{LengthScales{0.01, 0.01, 0.01}, LengthScales{1.0, 0.3, 0.02}};
  int events = 0;
  while (!(b.upper == b.lower)) {
    b = ShrinkUpperBounds(b, 0.5);
    ++events;
  }
  CHECK(events <= std::ceil(std::log(0.01) / std::log(0.5)));
}

TEST_CASE("hyper bounds helpers") {
  const HyperBounds b{LengthScales{0.01, 0.1}, LengthScales{1.0, 0.4}};
  CHECK(b.GeometricMidpoint().values()[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(b.GeometricMidpoint().values()[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(b.VolumeRatio() == doctest::Approx(400.0).epsilon(1e-14));
  CHECK(b.Contains(LengthScales{0.5, 0.1}));
  CHECK_FALSE(b.Contains(LengthScales{0.5, 0.5}));
  const LengthScales clamped = b.Clamp(LengthScales{5.0, 0.001});
  CHECK(clamped.values()[0] == 1.0);
  CHECK(clamped.values()[1] == 0.1);
  const HyperBounds bad{LengthScales{0.5}, LengthScales{0.1}};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}

TEST_CASE("constrained estimate with collapsed bounds or no data") {
  Gen g(51);
  const Dataset data = SampleSe(g, 10, 0.2, 0.05);
  const HyperBounds collapsed{LengthScales{0.3}, LengthScales{0.3}};
  CHECK(EstimateThetaConstrained(data, collapsed, KernelFamily::kSquaredExponential).values()[0] ==
        0.3);
  const HyperBounds b{LengthScales{0.01}, LengthScales{1.0}};
  CHECK(EstimateThetaConstrained(Dataset::Empty(1, 0.05), b, KernelFamily::kMatern52).values()[0] ==
        doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("constrained estimate recovers a known length scale") {
  Gen g(52);
  const HyperBounds b{LengthScales{0.01}, LengthScales{1.0}};
  const int seeds = 30;
  int hits = 0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset data = SampleSe(g, 40, 0.2, 0.05);
    const double est = EstimateThetaConstrained(data, b, KernelFamily::kSquaredExponential).values()[0];
    CHECK(b.Contains(LengthScales{est}));
    if (est >= 0.1 && est <= 0.4) ++hits;
  }
  CHECK(hits >= 0.9 * seeds);
}

TEST_CASE("constrained estimate beats random feasible probes") {
  Gen g(53);
  for (int n = 0; n < 20; ++n) {
    const int d = UniformInt(g, 1, 2);
    const Eigen::MatrixXd x = RandomPoints(g, 15, d);
    const Dataset data(x, RandomVector(g, 15, -1, 1), 0.1);
    Eigen::VectorXd lo(d), hi(d);
    for (int j = 0; j < d; ++j) lo[j] = LogUniform(g, 0.01, 0.1), hi[j] = LogUniform(g, 0.2, 2.0);
    const HyperBounds b{LengthScales(lo), LengthScales(hi)};
    const KernelFamily family = FamilyOf(n);
    const LengthScales est = EstimateThetaConstrained(data, b, family);
    CHECK(b.Contains(est));
    CHECK(est == EstimateThetaConstrained(data, b, family));
    const double best = LogMarginalLikelihood({family, est}, data);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd probe(d);
      for (int j = 0; j < d; ++j) probe[j] = LogUniform(g, lo[j], hi[j]);
      CHECK(best >= LogMarginalLikelihood({family, LengthScales(probe)}, data) - 1e-9);
    }
  }
}

TEST_CASE("nu selection") {
  const ControllerConfig cfg;
  const double xi = 3.49346;
  CHECK(ClampNu(0.5, xi, cfg) == 0.5);
  CHECK(ClampNu(1e-6, xi, cfg) == doctest::Approx(cfg.c1 * xi));
  CHECK(ClampNu(100.0, xi, cfg) == doctest::Approx(cfg.c2 * xi));
  CHECK(ClampNu(0.5, 0.0, cfg) == 0.5);
  CHECK(ClampNu(100.0, 0.0, cfg) == doctest::Approx(XiStatistic(0.0, 1, cfg.delta)));

  ControllerConfig bad = cfg;
  bad.c1 = 2.0;
  CHECK_THROWS_AS(ClampNu(0.5, xi, bad), std::invalid_argument);

  const KernelSpec spec{KernelFamily::kSquaredExponential, LengthScales{0.2}};
  CHECK(ChooseNu(xi, 0.7, Dataset::Empty(1, 0.1), spec, cfg) == 0.7);

  Gen g(54);
  for (int n = 0; n < 100; ++n) {
    const Dataset data(RandomPoints(g, 8, 1), RandomVector(g, 8, -5, 5), 0.1);
    const double x = LogUniform(g, 0.5, 50.0);
    const double nu = ChooseNu(x, 1.0, data, spec, cfg);
    CHECK(nu >= cfg.c1 * x);
    CHECK(nu <= cfg.c2 * x);
  }
}

TEST_CASE("signal scale estimate") {
  const KernelSpec spec{KernelFamily::kSquaredExponential, LengthScales{1.0}};
  CHECK(SignalScaleEstimate(Dataset::Empty(1, 0.1), spec) == 0.0);
  // One point: y^2 / (1 + sigma^2).
  const Dataset one(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 2.0), 1.0);
  CHECK(SignalScaleEstimate(one, spec) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}
