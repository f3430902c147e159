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

#include "eibo/verify.h"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "eibo/acquisition.h"
#include "eibo/benchlab.h"
#include "eibo/gp.h"
#include "eibo/hypercontrol.h"
#include "eibo/infogain.h"
#include "eibo/oracles.h"
#include "eibo/trace_io.h"

namespace eibo::verify {

namespace {

using Gen = std::mt19937_64;

double Uniform(Gen& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

int UniformInt(Gen& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

double LogUniform(Gen& g, double lo, double hi) {
  return std::exp(Uniform(g, std::log(lo), std::log(hi)));
}

Eigen::MatrixXd RandomPoints(Gen& g, int n, int d) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = Uniform(g, 0.0, 1.0);
  }
  return x;
}

Eigen::VectorXd RandomScales(Gen& g, int d, double lo, double hi) {
  Eigen::VectorXd v(d);
  for (int j = 0; j < d; ++j) v[j] = LogUniform(g, lo, hi);
  return v;
}

KernelFamily RandomFamily(Gen& g) {
  return UniformInt(g, 0, 1) == 0 ? KernelFamily::kSquaredExponential
                                  : KernelFamily::kMatern52;
}

CheckResult Finish(std::string name, double error, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.error = error;
  r.tolerance = tolerance;
  r.passed = std::isfinite(error) && error <= tolerance;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

CheckResult KernelProperties(int instances, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(g, 1, 3);
    const int t = UniformInt(g, 1, 20);
    const KernelSpec spec{RandomFamily(g), LengthScales(RandomScales(g, d, 0.05, 2.0))};
    const Eigen::MatrixXd x = RandomPoints(g, t, d);
    const Eigen::MatrixXd k = KernelMatrix(spec, x);
    const Eigen::MatrixXd ref = oracle::Gram(spec.family, spec.lengthscales.values(), x, x);
    worst = std::max(worst, (k - ref).cwiseAbs().maxCoeff());
    worst = std::max(worst, (k - k.transpose()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (k.diagonal().array() - 1.0).abs().maxCoeff());
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff();
    // Eigenvalues above -1e-10 count as PSD; deeper negatives are reported
    // relative to that allowance.
    if (min_eig < -1e-10) worst = std::max(worst, -min_eig);
  }
  return Finish("kernel_properties", worst, 1e-10,
                "symmetry, unit diagonal, PSD and agreement with the quadratic-form kernel");
}

CheckResult GpOracleEquivalence(int instances, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(g, 1, 3);
    const int t = UniformInt(g, 0, 15);
    const KernelFamily family = n % 2 == 0 ? KernelFamily::kSquaredExponential
                                           : KernelFamily::kMatern52;
    const Eigen::VectorXd theta = RandomScales(g, d, 0.1, 1.0);
    const double sigma = LogUniform(g, 0.05, 1.0);
    const Eigen::MatrixXd x = RandomPoints(g, t, d);
    Eigen::VectorXd y(t);
    for (int i = 0; i < t; ++i) y[i] = Uniform(g, -2.0, 2.0);
    const Eigen::MatrixXd q = RandomPoints(g, 6, d);

    const Posterior post =
        Posterior::Fit(KernelSpec{family, LengthScales(theta)}, Dataset(x, y, sigma));
    const oracle::DensePosterior ref = oracle::Posterior(family, theta, x, y, sigma, q);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      worst = std::max(worst, std::abs(post.Mean(q.row(i).transpose()) - ref.mean[i]));
      worst = std::max(worst, std::abs(post.Variance(q.row(i).transpose()) -
                                       std::max(0.0, ref.cov(i, i))));
      for (Eigen::Index j = 0; j < q.rows(); ++j) {
        worst = std::max(worst, std::abs(post.Covariance(q.row(i).transpose(),
                                                         q.row(j).transpose()) -
                                         ref.cov(i, j)));
      }
    }
  }
  return Finish("gp_oracle_equivalence", worst, 1e-8,
                std::to_string(instances) + " instances, t <= 15, d <= 3, both kernels");
}

CheckResult EiMonteCarloAgreement(int configs, int samples, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < configs; ++n) {
    const double mean = Uniform(g, -1.0, 1.0);
    const double sd = Uniform(g, 0.05, 1.0);
    const double incumbent = Uniform(g, -1.0, 1.0);
    const double nu = Uniform(g, 0.1, 2.0);
    const double closed = EiRescaledValue(mean, sd, incumbent, nu);
    const double mc = oracle::ExpectedImprovementMc(mean, sd, incumbent, nu, samples, g);
    worst = std::max(worst, std::abs(closed - mc));
  }
  return Finish("ei_mc_agreement", worst, 3e-3,
                std::to_string(configs) + " configurations, " + std::to_string(samples) +
                    " samples each");
}

CheckResult TauReflection() {
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double z = -10.0 + 1e-3 * i;
    worst = std::max(worst, std::abs(Tau(z) - Tau(-z) - z));
  }
  return Finish("tau_reflection", worst, 1e-12, "tau(z) - tau(-z) = z on [-10, 10]");
}

CheckResult TauMonotone() {
  double worst = 0.0;
  double prev = Tau(-40.0);
  for (int i = 1; i <= 80000; ++i) {
    const double cur = Tau(-40.0 + 1e-3 * i);
    worst = std::max(worst, prev - cur);
    prev = cur;
  }
  return Finish("tau_monotone", worst, 0.0, "largest decrease between grid neighbours on [-40, 40]");
}

CheckResult TauLinearBound() {
  double worst = 0.0;
  for (int i = 1; i <= 40000; ++i) {
    const double z = 1e-3 * i;
    worst = std::max(worst, Tau(z) - (1.0 + z));
    worst = std::max(worst, z - Tau(z));
    worst = std::max(worst, -Tau(-z));
  }
  return Finish("tau_linear_bound", worst, 1e-12,
                "max(0, z) <= tau(z) <= 1 + z on (0, 40] and tau >= 0");
}

CheckResult TauTailAccuracy() {
  // tau(z) is the integral of Phi from -inf to z; Simpson's rule on a
  // window below z is an independent reference in the lower tail.
  double worst = 0.0;
  for (double z = -30.0; z <= -2.0; z += 0.25) {
    constexpr int kIntervals = 20000;
    const double a = z - 12.0;
    const double h = (z - a) / kIntervals;
    double sum = NormalCdf(a) + NormalCdf(z);
    for (int i = 1; i < kIntervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * NormalCdf(a + i * h);
    const double ref = sum * h / 3.0;
    worst = std::max(worst, std::abs(Tau(z) - ref) / ref);
  }
  return Finish("tau_tail_accuracy", worst, 1e-8, "relative error against quadrature on [-30, -2]");
}

CheckResult EiSandwich(int triples, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < triples; ++n) {
    const double sd = Uniform(g, 0.01, 1.0);
    const double mean = Uniform(g, -2.0, 2.0);
    const double incumbent = Uniform(g, -2.0, 2.0);
    const double nu = LogUniform(g, 0.01, 10.0);
    const double phi = LogUniform(g, 0.01, 10.0);
    const double f = mean + phi * sd * Uniform(g, -1.0, 1.0);
    const double improvement = std::max(0.0, f - incumbent);
    const double ei = EiRescaledValue(mean, sd, incumbent, nu);
    const double lower = std::max(improvement - phi * sd,
                                  Tau(-phi / nu) / Tau(phi / nu) * improvement);
    const double upper = improvement + (phi + nu) * sd;
    const double scale = std::max(1.0, upper);
    worst = std::max(worst, (lower - ei) / scale);
    worst = std::max(worst, (ei - upper) / scale);
  }
  return Finish("ei_sandwich_bounds", worst, 1e-12,
                std::to_string(triples) + " synthetic triples with |mu - f| <= phi sd");
}

CheckResult InfoGainIdentity(int instances, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(g, 1, 3);
    const int t = UniformInt(g, 1, 20);
    const KernelSpec spec{RandomFamily(g), LengthScales(RandomScales(g, d, 0.05, 1.0))};
    const double sigma = LogUniform(g, 0.05, 1.0);
    const Eigen::MatrixXd x = RandomPoints(g, t, d);
    const InfoGainReport seq = InfoGainSequential(spec, x, sigma);
    const double eig = oracle::InfoGain(spec.family, spec.lengthscales.values(), x, sigma);
    worst = std::max(worst, std::abs(seq.total - seq.logdet_total));
    worst = std::max(worst, std::abs(seq.total - eig));
  }
  return Finish("info_gain_chain_rule", worst, 1e-8,
                "sequential variance sum against the log-det and eigenvalue forms");
}

CheckResult InfoGainMonotone(int instances, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(g, 1, 3);
    const int t = UniformInt(g, 1, 20);
    const KernelFamily family = RandomFamily(g);
    const Eigen::VectorXd wide = RandomScales(g, d, 0.05, 2.0);
    Eigen::VectorXd narrow(d);
    for (int j = 0; j < d; ++j) narrow[j] = wide[j] * Uniform(g, 0.1, 1.0);
    const double sigma = LogUniform(g, 0.05, 1.0);
    const Eigen::MatrixXd x = RandomPoints(g, t, d);
    const double gain_wide = InfoGainLogDet({family, LengthScales(wide)}, x, sigma);
    const double gain_narrow = InfoGainLogDet({family, LengthScales(narrow)}, x, sigma);
    worst = std::max(worst, gain_wide - gain_narrow);
  }
  return Finish("info_gain_lengthscale_order", worst, 1e-8,
                "information gain never drops when length scales shrink");
}

CheckResult NormScaling(int instances, std::uint64_t seed) {
  Gen g(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(g, 1, 3);
    const int t = UniformInt(g, 1, 10);
    const KernelFamily family = RandomFamily(g);
    const Eigen::VectorXd theta = RandomScales(g, d, 0.05, 0.3);
    Eigen::VectorXd narrow(d);
    for (int j = 0; j < d; ++j) narrow[j] = theta[j] * Uniform(g, 0.2, 1.0);
    const Eigen::MatrixXd x = RandomPoints(g, t, d);
    Eigen::VectorXd alpha(t);
    for (int i = 0; i < t; ++i) alpha[i] = Uniform(g, -1.0, 1.0);
    // f = sum_i alpha_i k_theta(x_i, .) observed at the centres, so
    // f^T K_theta^-1 f = alpha^T K_theta alpha is its exact squared norm.
    const Eigen::MatrixXd k = oracle::Gram(family, theta, x, x);
    const Eigen::VectorXd f = k * alpha;
    const double norm_wide = alpha.dot(f);
    const double norm_narrow = oracle::QuadraticForm(oracle::Gram(family, narrow, x, x), f);
    const double c2 = (theta.array() / narrow.array()).prod();
    worst = std::max(worst, (norm_narrow - c2 * norm_wide) / std::max(1e-300, c2 * norm_wide));
  }
  return Finish("rkhs_norm_scaling", worst, 1e-6,
                "relative excess of f^T K'^-1 f over C2 f^T K^-1 f");
}

CheckResult ShrinkRuleExamples() {
  double worst = 0.0;
  auto compare = [&](const HyperBounds& in, const Eigen::VectorXd& expected) {
    const HyperBounds out = ShrinkUpperBounds(in, 0.5);
    worst = std::max(worst, (out.upper.values() - expected).cwiseAbs().maxCoeff());
    worst = std::max(worst, (out.lower.values() - in.lower.values()).cwiseAbs().maxCoeff());
  };
  compare({LengthScales{0.01, 0.01}, LengthScales{1.0, 0.5}}, Eigen::Vector2d(0.5, 0.5));
  compare({LengthScales{0.05}, LengthScales{0.06}}, Eigen::VectorXd::Constant(1, 0.05));
  compare({LengthScales{0.2, 0.3}, LengthScales{0.2, 0.3}}, Eigen::Vector2d(0.2, 0.3));
  return Finish("shrink_rule_examples", worst, 0.0,
                "(1.0, 0.5) -> (0.5, 0.5), clamp at the lower bound, fixed point");
}

CheckResult CounterContract() {
  // sigma = 1 keeps every posterior variance below t_sigma sigma^2 once
  // there is data, so E climbs by one each round.
  RunConfig cfg;
  cfg.domain = Box::Unit(2);
  cfg.horizon = 12;
  cfg.n0 = 3;
  cfg.noise_std = 1.0;
  cfg.candidates.lowdiscrepancy_points = 256;
  cfg.candidates.refine_starts = 2;
  cfg.candidates.refine_iterations = 10;
  Objective obj;
  obj.name = "flat";
  obj.evaluate = [](const Eigen::VectorXd&, Rng&) { return Observation{0.0, 0.0}; };
  const HyperInit init{HyperBounds{LengthScales{0.01, 0.01}, LengthScales{1.0, 0.5}},
                       LengthScales{0.1, 0.1}};
  const RunTrace trace = Run(obj, cfg, init);
  double mismatches = trace.completed() ? 0.0 : 1.0;
  for (const auto& r : trace.records) {
    const bool expect_shrink = r.t % 5 == 0;
    if (r.shrink != expect_shrink) mismatches += 1.0;
    if (r.e_counter != r.t % 5) mismatches += 1.0;
    if (r.t == 5 && !(r.theta_upper == LengthScales{0.5, 0.5})) mismatches += 1.0;
  }
  return Finish("counter_contract", mismatches, 0.0,
                "shrink exactly at rounds 5 and 10 under forced low variance");
}

CheckResult SubGaussianTails(int draws, std::uint64_t seed) {
  double worst = -std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  Rng rng(seed);
  for (NoiseFamily family : {NoiseFamily::kGaussian, NoiseFamily::kSymmetricBernoulli,
                             NoiseFamily::kUniform}) {
    const NoiseSpec spec{family, 0.01};
    std::vector<double> abs_draws(draws);
    for (auto& v : abs_draws) v = std::abs(SampleNoise(spec, rng));
    for (int m = 1; m <= 3; ++m) {
      const double a = m * spec.scale;
      const double hits = static_cast<double>(
          std::count_if(abs_draws.begin(), abs_draws.end(), [a](double v) { return v >= a; }));
      const double p = hits / draws;
      const double se = std::sqrt(p * (1.0 - p) / draws);
      const double bound = 2.0 * std::exp(-0.5 * m * m) + 3.0 * se;
      worst = std::max(worst, p - bound);
    }
    detail << ToString(family) << ' ';
  }
  return Finish("subgaussian_tails", worst, 0.0,
                "largest P(|e| >= a) - (2 exp(-a^2 / 2 s^2) + 3 SE); families: " + detail.str());
}

CheckResult TrapExtrema() {
  const TrapObjective trap;
  double best_x = 0.0, best = -1.0, local = -1.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = i / 10000.0;
    const double f = trap.Noiseless(x);
    if (f > best) best = f, best_x = x;
    if (x < 0.5) local = std::max(local, f);
  }
  const double err = std::abs(best_x - 0.9) <= 1e-3
                         ? std::max(std::abs(best - 4.0), std::abs(local - 2.0))
                         : std::numeric_limits<double>::infinity();
  return Finish("trap_extrema", err, 1e-6,
                "global peak near 0.9 with value 4, local peak value 2");
}

std::vector<RunTrace> ReferenceRuns(int horizon) {
  std::vector<RunTrace> runs;
  for (const char* name : {"trap", "wide_peak"}) {
    for (KernelFamily family : {KernelFamily::kSquaredExponential, KernelFamily::kMatern52}) {
      ExperimentConfig cfg = TrapExperiment();
      cfg.objective = name;
      cfg.run.kernel = family;
      cfg.run.horizon = horizon;
      cfg.run.seed = runs.size() + 11;
      runs.push_back(Run(cfg.MakeObjective(), cfg.run, cfg.init));
    }
  }
  return runs;
}

CheckResult VarianceSumBound(const std::vector<RunTrace>& runs) {
  double worst = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (const auto& tr : runs) {
    for (const VarianceSumCheck* c : {&tr.variance_sum_realized, &tr.variance_sum_theta_lower}) {
      worst = std::max(worst, c->variance_sum - c->bound);
      if (!c->holds()) ++violations;
    }
    if (!tr.completed()) ++violations;
  }
  return Finish("variance_sum_bound", violations, 0.0,
                "violations over " + std::to_string(runs.size()) +
                    " runs; largest sum - bound = " + FormatDouble(worst));
}

CheckResult MeanGapBound(const std::vector<RunTrace>& runs) {
  double min_slack = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (const auto& tr : runs) {
    for (const auto& r : tr.records) {
      if (!r.mean_gap_slack) continue;
      ++checked;
      min_slack = std::min(min_slack, *r.mean_gap_slack);
    }
  }
  const double err = checked == 0 ? std::numeric_limits<double>::infinity() : -min_slack;
  return Finish("mean_gap_bound", err, 1e-8,
                std::to_string(checked) + " rounds checked; error is minus the smallest slack");
}

CheckResult HyperStateInvariants(const std::vector<RunTrace>& runs) {
  int violations = 0;
  for (const auto& tr : runs) {
    LengthScales upper = tr.initial_bounds.upper;
    const ControllerConfig& c = tr.config.controller;
    for (const auto& r : tr.records) {
      if (!(tr.initial_bounds.lower.AllLessEqual(r.theta) && r.theta.AllLessEqual(upper))) {
        ++violations;
      }
      if (tr.policy == Policy::kAdaptive && !(r.nu >= c.c1 * r.xi && r.nu <= c.c2 * r.xi)) {
        ++violations;
      }
      upper = r.theta_upper;
    }
  }
  return Finish("hyper_state_invariants", violations, 0.0,
                "bounds on theta_t and nu_t in [c1 xi_t, c2 xi_t]");
}

std::vector<CheckResult> RunAll() {
  std::vector<CheckResult> out;
  out.push_back(KernelProperties());
  out.push_back(GpOracleEquivalence());
  out.push_back(EiMonteCarloAgreement());
  out.push_back(TauReflection());
  out.push_back(TauMonotone());
  out.push_back(TauLinearBound());
  out.push_back(TauTailAccuracy());
  out.push_back(EiSandwich());
  out.push_back(InfoGainIdentity());
  out.push_back(InfoGainMonotone());
  out.push_back(NormScaling());
  out.push_back(ShrinkRuleExamples());
  out.push_back(CounterContract());
  out.push_back(SubGaussianTails());
  out.push_back(TrapExtrema());
  const std::vector<RunTrace> runs = ReferenceRuns();
  out.push_back(VarianceSumBound(runs));
  out.push_back(MeanGapBound(runs));
  out.push_back(HyperStateInvariants(runs));
  return out;
}

void WriteReport(const std::vector<CheckResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-24s error=%-12.4g tol=%-10.4g ",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.error, r.tolerance);
    out << line << r.detail << '\n';
  }
}

nlohmann::json ReportToJson(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"name", r.name},
                   {"passed", r.passed},
                   {"error", std::isfinite(r.error) ? nlohmann::json(r.error) : nlohmann::json(nullptr)},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  return {{"all_passed", all}, {"checks", arr}};
}

}  // namespace eibo::verify
