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

#include "eibo/trace_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace eibo {

using nlohmann::json;

namespace {

const json& Require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("config: missing required key '") + key + "'");
  return *it;
}

[[noreturn]] void Invalid(const char* key, const std::string& why) {
  throw ConfigError(std::string("config: invalid value for '") + key + "': " + why);
}

double Number(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_number()) Invalid(key, "expected a number");
  return v.get<double>();
}

int Integer(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_number_integer()) Invalid(key, "expected an integer");
  return v.get<int>();
}

std::string String(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_string()) Invalid(key, "expected a string");
  return v.get<std::string>();
}

Box ParseBox(const json& v, const char* key) {
  if (!v.is_array() || v.empty()) Invalid(key, "expected a list of [lower, upper] pairs");
  Box box;
  box.lower.resize(static_cast<Eigen::Index>(v.size()));
  box.upper.resize(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& pair = v[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      Invalid(key, "expected a list of [lower, upper] pairs");
    }
    box.lower[static_cast<Eigen::Index>(i)] = pair[0].get<double>();
    box.upper[static_cast<Eigen::Index>(i)] = pair[1].get<double>();
  }
  try {
    box.Validate();
  } catch (const std::invalid_argument& e) {
    Invalid(key, e.what());
  }
  return box;
}

json BoxToJson(const Box& box) {
  json out = json::array();
  for (int i = 0; i < box.dim(); ++i) out.push_back({box.lower[i], box.upper[i]});
  return out;
}

LengthScales ParseLengthScales(const json& v, const char* key, int dim) {
  Eigen::VectorXd values(dim);
  if (v.is_number()) {
    values.setConstant(v.get<double>());
  } else if (v.is_array() && static_cast<int>(v.size()) == dim) {
    for (int i = 0; i < dim; ++i) {
      if (!v[i].is_number()) Invalid(key, "expected numbers");
      values[i] = v[i].get<double>();
    }
  } else {
    Invalid(key, "expected a number or a list of " + std::to_string(dim) + " numbers");
  }
  try {
    return LengthScales(std::move(values));
  } catch (const std::invalid_argument& e) {
    Invalid(key, e.what());
  }
}

json LengthScalesToJson(const LengthScales& theta) {
  json out = json::array();
  for (int i = 0; i < theta.dim(); ++i) out.push_back(theta[i]);
  return out;
}

std::string JoinVector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += FormatDouble(v[i]);
  }
  return out;
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string("nan");
}

std::vector<std::string> SplitFields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s, int line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("trace csv: line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

Eigen::VectorXd ParseJoined(const std::string& s, int line) {
  const auto parts = SplitFields(s, ';');
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = ParseDouble(parts[i], line);
  }
  return v;
}

std::optional<double> ParseOptional(const std::string& s, int line) {
  const double v = ParseDouble(s, line);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

}  // namespace

Objective ExperimentConfig::MakeObjective() const {
  return eibo::MakeObjective(objective, NoiseSpec{noise_family, run.noise_std});
}

ExperimentConfig ParseExperimentConfig(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig cfg;
  RunConfig& run = cfg.run;
  run.domain = ParseBox(Require(j, "domain"), "domain");
  const int d = run.domain.dim();
  run.horizon = Integer(j, "horizon");
  run.n0 = Integer(j, "n0");
  try {
    run.kernel = ParseKernelFamily(String(j, "kernel"));
  } catch (const std::invalid_argument& e) {
    Invalid("kernel", e.what());
  }
  run.controller.t_sigma = Number(j, "t_sigma");
  run.controller.p = Number(j, "p");
  run.controller.c1 = Number(j, "c1");
  run.controller.c2 = Number(j, "c2");
  run.controller.e_threshold = Integer(j, "e_threshold");
  run.controller.delta = Number(j, "delta");
  run.noise_std = Number(j, "sigma");

  const LengthScales lower = ParseLengthScales(Require(j, "theta_lower"), "theta_lower", d);
  const LengthScales upper = ParseLengthScales(Require(j, "theta_upper"), "theta_upper", d);
  cfg.init.bounds = HyperBounds{lower, upper};
  try {
    cfg.init.bounds.Validate();
  } catch (const std::invalid_argument& e) {
    Invalid("theta_upper", e.what());
  }
  const json& init = Require(j, "theta_init");
  if (init.is_string()) {
    if (init.get<std::string>() != "midpoint") Invalid("theta_init", "expected \"midpoint\" or numbers");
    cfg.init.theta = cfg.init.bounds.GeometricMidpoint();
  } else {
    cfg.init.theta = ParseLengthScales(init, "theta_init", d);
    if (!cfg.init.bounds.Contains(cfg.init.theta)) {
      Invalid("theta_init", "need theta_lower <= theta_init <= theta_upper");
    }
  }

  const int points = Integer(j, "candidate_points");
  if (points < 2) Invalid("candidate_points", "need at least 2 points");
  if (d == 1) {
    run.candidates.grid_points_1d = points;
  } else {
    run.candidates.lowdiscrepancy_points = points;
  }
  const json& seed = Require(j, "seed");
  if (!seed.is_number_unsigned()) Invalid("seed", "expected a non-negative integer");
  run.seed = seed.get<std::uint64_t>();
  try {
    cfg.policy = ParsePolicy(String(j, "policy"));
  } catch (const std::invalid_argument& e) {
    Invalid("policy", e.what());
  }
  cfg.objective = String(j, "objective");
  if (cfg.objective != "trap" && cfg.objective != "wide_peak") {
    Invalid("objective", "expected trap or wide_peak");
  }
  if (d != 1) Invalid("domain", "the built-in objectives are one-dimensional");

  if (auto it = j.find("initial_box"); it != j.end() && !it->is_null()) {
    run.initial_box = ParseBox(*it, "initial_box");
    if (run.initial_box->dim() != d) Invalid("initial_box", "dimension differs from domain");
  }
  if (auto it = j.find("noise"); it != j.end()) {
    if (!it->is_string()) Invalid("noise", "expected a string");
    try {
      cfg.noise_family = ParseNoiseFamily(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      Invalid("noise", e.what());
    }
  }

  try {
    run.controller.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    run.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON (" + e.what() + ")");
  }
  return ParseExperimentConfig(j);
}

json ExperimentConfigToJson(const ExperimentConfig& cfg) {
  const RunConfig& run = cfg.run;
  json j;
  j["domain"] = BoxToJson(run.domain);
  j["horizon"] = run.horizon;
  j["n0"] = run.n0;
  j["kernel"] = std::string(ToString(run.kernel));
  j["t_sigma"] = run.controller.t_sigma;
  j["p"] = run.controller.p;
  j["c1"] = run.controller.c1;
  j["c2"] = run.controller.c2;
  j["e_threshold"] = run.controller.e_threshold;
  j["delta"] = run.controller.delta;
  j["sigma"] = run.noise_std;
  j["theta_lower"] = LengthScalesToJson(cfg.init.bounds.lower);
  j["theta_upper"] = LengthScalesToJson(cfg.init.bounds.upper);
  j["theta_init"] = LengthScalesToJson(cfg.init.theta);
  j["candidate_points"] = run.domain.dim() == 1 ? run.candidates.grid_points_1d
                                                : run.candidates.lowdiscrepancy_points;
  j["seed"] = run.seed;
  j["policy"] = std::string(ToString(cfg.policy));
  j["objective"] = cfg.objective;
  if (run.initial_box) j["initial_box"] = BoxToJson(*run.initial_box);
  j["noise"] = std::string(ToString(cfg.noise_family));
  return j;
}

ExperimentConfig TrapExperiment() {
  ExperimentConfig cfg;
  cfg.run.domain = Box::Unit(1);
  cfg.run.horizon = 60;
  cfg.run.n0 = 3;
  cfg.run.noise_std = 0.01;
  cfg.init.bounds = HyperBounds{LengthScales{0.01}, LengthScales{0.5}};
  cfg.init.theta = cfg.init.bounds.GeometricMidpoint();
  cfg.policy = Policy::kAdaptive;
  cfg.objective = "trap";
  return cfg;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteTraceCsv(const RunTrace& trace, std::ostream& out) {
  for (std::size_t i = 0; i < std::size(kTraceColumns); ++i) {
    out << (i ? "," : "") << kTraceColumns[i];
  }
  out << '\n';
  for (const auto& r : trace.records) {
    out << r.t << ',' << JoinVector(r.x) << ',' << FormatDouble(r.y) << ','
        << Optional(r.f_noiseless) << ',' << JoinVector(r.theta.values()) << ','
        << FormatDouble(r.nu) << ',' << FormatDouble(r.xi) << ','
        << FormatDouble(r.var_before) << ',' << FormatDouble(r.mu_plus) << ','
        << r.e_counter << ',' << (r.shrink ? 1 : 0) << ',' << Optional(r.regret) << ','
        << Optional(r.cumulative_regret) << ',' << Optional(r.mean_gap_slack) << '\n';
  }
}

void WriteTraceCsv(const RunTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteTraceCsv(trace, out);
}

std::vector<TraceRow> ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace csv: empty input");
  const auto header = SplitFields(line, ',');
  if (header.size() != std::size(kTraceColumns)) {
    throw ConfigError("trace csv: expected " + std::to_string(std::size(kTraceColumns)) +
                      " columns, found " + std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kTraceColumns[i]) {
      throw ConfigError("trace csv: column " + std::to_string(i + 1) + " is '" + header[i] +
                        "', expected '" + kTraceColumns[i] + "'");
    }
  }
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = SplitFields(line, ',');
    if (f.size() != header.size()) {
      throw ConfigError("trace csv: line " + std::to_string(lineno) + " has " +
                        std::to_string(f.size()) + " fields");
    }
    TraceRow r;
    r.t = static_cast<int>(ParseDouble(f[0], lineno));
    r.x = ParseJoined(f[1], lineno);
    r.y = ParseDouble(f[2], lineno);
    r.f_noiseless = ParseOptional(f[3], lineno);
    r.theta = ParseJoined(f[4], lineno);
    r.nu = ParseDouble(f[5], lineno);
    r.xi = ParseDouble(f[6], lineno);
    r.var_before = ParseDouble(f[7], lineno);
    r.mu_plus = ParseDouble(f[8], lineno);
    r.e_counter = static_cast<int>(ParseDouble(f[9], lineno));
    r.shrink = ParseDouble(f[10], lineno) != 0.0;
    r.regret = ParseOptional(f[11], lineno);
    r.cumulative_regret = ParseOptional(f[12], lineno);
    r.mean_gap_slack = ParseOptional(f[13], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TraceRow> ReadTraceCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trace csv: cannot read " + path.string());
  return ReadTraceCsv(in);
}

RunTrace TraceFromRows(const ExperimentConfig& cfg, const std::vector<TraceRow>& rows) {
  RunTrace trace;
  trace.config = cfg.run;
  trace.policy = cfg.policy;
  trace.objective_name = cfg.objective;
  trace.initial_bounds = cfg.init.bounds;
  HyperBounds bounds = cfg.init.bounds;
  const int d = cfg.run.domain.dim();
  for (const auto& row : rows) {
    if (row.x.size() != d || row.theta.size() != d) {
      throw ConfigError("trace csv: round " + std::to_string(row.t) +
                        " has a point or length scale of the wrong dimension");
    }
    IterationRecord rec;
    rec.t = row.t;
    rec.x = row.x;
    rec.y = row.y;
    rec.f_noiseless = row.f_noiseless;
    rec.theta = LengthScales(row.theta);
    rec.nu = row.nu;
    rec.xi = row.xi;
    rec.var_before = row.var_before;
    rec.mu_plus = row.mu_plus;
    rec.e_counter = row.e_counter;
    rec.shrink = row.shrink;
    rec.regret = row.regret;
    rec.cumulative_regret = row.cumulative_regret;
    rec.mean_gap_slack = row.mean_gap_slack;
    if (row.shrink && cfg.policy == Policy::kAdaptive) {
      bounds = ShrinkUpperBounds(bounds, cfg.run.controller.p);
      ++trace.shrink_events;
    }
    rec.theta_upper = bounds.upper;
    trace.records.push_back(std::move(rec));
  }
  trace.final_bounds = bounds;
  return trace;
}

json SweepSummaryToJson(const SweepSummary& s) {
  json j;
  j["policy"] = std::string(ToString(s.policy));
  j["n_seeds"] = s.n_seeds;
  j["success_rate"] = s.success_rate;
  j["threshold"] = s.threshold;
  j["median_RT"] = std::isnan(s.median_RT) ? json(nullptr) : json(s.median_RT);
  json q = json::object();
  for (const auto& [level, value] : s.quantiles_RT_over_T) {
    char key[16];
    std::snprintf(key, sizeof key, "%g", level);
    q[key] = std::isnan(value) ? json(nullptr) : json(value);
  }
  j["quantiles_RT_over_T"] = q;
  j["failed_seeds"] = s.failed_seeds;
  return j;
}

void WriteSeedOutcomesCsv(const SweepSummary& summary, std::ostream& out) {
  out << "seed,failed,best_f,success,R_T,R_T_over_T,R_10_over_10,shrink_events,"
         "mean_gap_violations,variance_sum_holds\n";
  for (const auto& o : summary.outcomes) {
    out << o.seed << ',' << (o.failed ? 1 : 0) << ',' << FormatDouble(o.best_f) << ','
        << (o.success ? 1 : 0) << ',' << FormatDouble(o.cumulative_regret) << ','
        << FormatDouble(o.regret_rate) << ',' << FormatDouble(o.regret_rate_at_10) << ','
        << o.shrink_events << ',' << o.mean_gap_violations << ','
        << (o.variance_sum_holds ? 1 : 0) << '\n';
  }
}

json RunDiagnosticsToJson(const RunTrace& trace, const BoundDiagnostics& diag) {
  json j;
  j["policy"] = std::string(ToString(trace.policy));
  j["objective"] = trace.objective_name;
  j["seed"] = trace.config.seed;
  j["rounds"] = trace.records.size();
  j["completed"] = trace.completed();
  if (trace.abort_reason) j["abort_reason"] = *trace.abort_reason;
  if (auto best = trace.BestNoiselessValue()) j["best_f"] = *best;
  j["shrink_events"] = trace.shrink_events;
  j["theta_lower_final"] = LengthScalesToJson(trace.final_bounds.lower);
  j["theta_upper_final"] = LengthScalesToJson(trace.final_bounds.upper);
  j["mean_gap_violations"] = trace.mean_gap_violations;
  j["variance_sum_realized"] = {{"sum", trace.variance_sum_realized.variance_sum},
                                {"bound", trace.variance_sum_realized.bound},
                                {"holds", trace.variance_sum_realized.holds()}};
  j["variance_sum_theta_lower"] = {{"sum", trace.variance_sum_theta_lower.variance_sum},
                                   {"bound", trace.variance_sum_theta_lower.bound},
                                   {"holds", trace.variance_sum_theta_lower.holds()}};
  j["info_gain_realized"] = diag.info_gain_realized;
  j["C2"] = diag.c2;
  j["rkhs_norm"] = diag.rkhs_norm;
  j["beta_T"] = diag.beta_T;
  j["phi_T"] = diag.phi.empty() ? 0.0 : diag.phi.back();
  j["bound_curve_T"] = diag.bound_curve.empty() ? 0.0 : diag.bound_curve.back();
  return j;
}

void WriteJson(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace eibo
