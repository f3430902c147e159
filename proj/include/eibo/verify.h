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

#ifndef EIBO_VERIFY_H_
#define EIBO_VERIFY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "eibo/engine.h"

namespace eibo::verify {

/// One named check: the worst measured error against its tolerance.
struct CheckResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

CheckResult KernelProperties(int instances = 100, std::uint64_t seed = 1);
CheckResult GpOracleEquivalence(int instances = 100, std::uint64_t seed = 2);
CheckResult EiMonteCarloAgreement(int configs = 50, int samples = 1'000'000,
                                  std::uint64_t seed = 3);
CheckResult TauReflection();
CheckResult TauMonotone();
CheckResult TauLinearBound();
CheckResult TauTailAccuracy();
CheckResult EiSandwich(int triples = 1000, std::uint64_t seed = 4);
CheckResult InfoGainIdentity(int instances = 100, std::uint64_t seed = 5);
CheckResult InfoGainMonotone(int instances = 100, std::uint64_t seed = 6);
CheckResult NormScaling(int instances = 100, std::uint64_t seed = 7);
CheckResult ShrinkRuleExamples();
CheckResult CounterContract();
CheckResult SubGaussianTails(int draws = 1'000'000, std::uint64_t seed = 8);
CheckResult TrapExtrema();

/// Variance-sum bound and mean-gap bound over the given finished runs.
CheckResult VarianceSumBound(const std::vector<RunTrace>& runs);
CheckResult MeanGapBound(const std::vector<RunTrace>& runs);
/// theta^L <= theta_t <= theta^U and nu_t in [c1 xi_t, c2 xi_t] every round.
CheckResult HyperStateInvariants(const std::vector<RunTrace>& runs);

/// Short engine runs used by the run-level checks: the trap and the wide
/// peak under both kernels.
std::vector<RunTrace> ReferenceRuns(int horizon = 20);

std::vector<CheckResult> RunAll();

void WriteReport(const std::vector<CheckResult>& results, std::ostream& out);
nlohmann::json ReportToJson(const std::vector<CheckResult>& results);

}  // namespace eibo::verify

#endif  // EIBO_VERIFY_H_
