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

#ifndef EIBO_TRACE_IO_H_
#define EIBO_TRACE_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "eibo/benchlab.h"
#include "eibo/engine.h"

namespace eibo {

/// Malformed or incomplete experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce a run or a sweep.
struct ExperimentConfig {
  RunConfig run;
  HyperInit init{HyperBounds{LengthScales{1.0}, LengthScales{1.0}}, LengthScales{1.0}};
  Policy policy = Policy::kAdaptive;
  std::string objective = "trap";
  NoiseFamily noise_family = NoiseFamily::kGaussian;

  Objective MakeObjective() const;
};

// Required keys, in the order they are written.
inline constexpr const char* kConfigKeys[] = {
    "domain",   "horizon",     "n0",          "kernel",     "t_sigma",
    "p",        "c1",          "c2",          "e_threshold", "delta",
    "sigma",    "theta_lower", "theta_upper", "theta_init", "candidate_points",
    "seed",     "policy",      "objective"};

/// Throws ConfigError naming the first missing or invalid key. Optional
/// keys: "initial_box" (same shape as "domain") and "noise" (gaussian,
/// bernoulli or uniform). "theta_init" may be the string "midpoint".
/// Length-scale entries may be a scalar, broadcast to every dimension.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& j);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& cfg);

/// The trap setup used by the sweeps and the acceptance suite.
ExperimentConfig TrapExperiment();

/// %.17g, with "nan" and "inf"/"-inf" spelled out.
std::string FormatDouble(double v);
inline constexpr const char* kTraceColumns[] = {
    "t",        "x",       "y",  "f_noiseless", "theta", "nu", "xi",
    "var_before", "mu_plus", "E", "shrink",     "r_t",   "R_t", "lemma10_slack"};

void WriteTraceCsv(const RunTrace& trace, std::ostream& out);
void WriteTraceCsv(const RunTrace& trace, const std::filesystem::path& path);

struct TraceRow {
  int t = 0;
  Eigen::VectorXd x;
  double y = 0.0;
  std::optional<double> f_noiseless;
  Eigen::VectorXd theta;
  double nu = 0.0;
  double xi = 0.0;
  double var_before = 0.0;
  double mu_plus = 0.0;
  int e_counter = 0;
  bool shrink = false;
  std::optional<double> regret;
  std::optional<double> cumulative_regret;
  std::optional<double> mean_gap_slack;
};

/// Parses a trace CSV. Throws ConfigError on a malformed header or row.
std::vector<TraceRow> ReadTraceCsv(std::istream& in);
std::vector<TraceRow> ReadTraceCsv(const std::filesystem::path& path);

/// Rebuilds the parts of a RunTrace that the bound diagnostics read: the
/// selected points, noiseless values and the bounds after replaying the
/// recorded shrink events.
RunTrace TraceFromRows(const ExperimentConfig& cfg, const std::vector<TraceRow>& rows);

nlohmann::json SweepSummaryToJson(const SweepSummary& summary);
void WriteSeedOutcomesCsv(const SweepSummary& summary, std::ostream& out);

nlohmann::json RunDiagnosticsToJson(const RunTrace& trace, const BoundDiagnostics& diag);

void WriteJson(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace eibo

#endif  // EIBO_TRACE_IO_H_
