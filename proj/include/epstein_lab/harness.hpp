// Copyright 2026 The epstein-lab authors.
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


// Statistics, the exact Rogers second moment, experiment reports and the
// named end-to-end experiments.

#ifndef EPSTEIN_LAB_HARNESS_HPP
#define EPSTEIN_LAB_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epstein_lab/parallel.hpp"

namespace epstein_lab::harness {

// How the reference distribution function behaves at sample points.
enum class CdfKind {
  kContinuous,  // F(x-) = F(x)
  kGeneral,     // left limits are taken as F(nextafter(x, -inf))
};

// sup_x |ECDF(x) - F(x)| over both one-sided deviations at the sample points.
// Ties are grouped. Requires at least 2 samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    CdfKind kind = CdfKind::kContinuous);

struct MomentEstimate {
  double estimate;
  double standard_error;  // jackknife
};

// k-th raw moment with its jackknife standard error; requires N >= 30.
MomentEstimate moment_estimator(const std::vector<double>& samples, int k);

// E[(R_n(A + delta) - R_n(A))^2] over the Haar measure, n >= 3, A >= 0,
// delta > 0.
double rogers_second_moment(int n, double A, double delta);

// Mean number of non-zero vectors of normalized volume <= V in a uniformly
// chosen index-p Hecke lattice (exact for finite p, from the representation
// numbers of Z^n). Tends to V as p grows.
double hecke_expected_count(int n, std::uint64_t p, double V);

// One machine-checkable line of a report.
struct ReportRow {
  std::string criterion;  // short identifier, e.g. "ks[c=0.35]"
  double statistic = 0;
  double target = 0;
  double tolerance = 0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t master_seed = 0;
  // Parameters as a JSON object text, for the report header.
  std::string parameters_json = "{}";
  std::vector<ReportRow> rows;
  double wall_time_seconds = 0;

  bool all_pass() const;
};

// JSON carries everything; CSV carries the rows only (no wall time), so that
// two runs with the same seed produce identical files.
std::string to_json(const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);
// RFC-4180 field quoting.
std::string csv_field(const std::string& field);
// 17 significant digits.
std::string format_double(double x);

// Per-experiment overrides; keys follow the JSON config schema
// {n, p, trials, A, c_grid, grid_step, tol}.
struct ExperimentConfig {
  std::optional<std::vector<int>> n;
  std::optional<std::uint64_t> p;
  std::optional<std::size_t> trials;
  std::optional<double> A;
  std::optional<std::vector<double>> c_grid;
  std::optional<double> grid_step;
  std::optional<double> tol;
};

// Parses one experiment's config object; throws ConfigError on unknown keys
// or wrong types. "n" may be an integer or a list of integers.
ExperimentConfig parse_config(const std::string& json_text);
// Picks the object stored under the experiment's name when the top level is
// keyed by experiment names, otherwise treats the whole text as the config.
ExperimentConfig parse_config_for(const std::string& json_text, const std::string& experiment);

struct RunOptions {
  std::uint64_t master_seed = 1;
  Execution execution = Execution::kParallel;
  // Lattice cache; empty disables it.
  std::filesystem::path cache_dir;
  // Progress lines; empty disables them.
  std::function<void(const std::string&)> log;
};

const std::vector<std::string>& experiment_names();
// One line per experiment with its defaults, for --help.
std::string describe_experiments();

// Throws ConfigError for an unknown name or a config outside the
// experiment's domain.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config,
                                const RunOptions& options);

}  // namespace epstein_lab::harness

#endif  // EPSTEIN_LAB_HARNESS_HPP
