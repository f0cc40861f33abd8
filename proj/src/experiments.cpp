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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/epstein.hpp"
#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/poisson.hpp"
#include "epstein_lab/specfun.hpp"
#include "epstein_lab/stable.hpp"

namespace epstein_lab::harness {
namespace {

using nlohmann::json;

constexpr std::uint64_t kLargePrime = 2147483647;  // 2^31 - 1
constexpr double kGaussianThreshold = 0.05;

// Independent stream per (master seed, tag).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag * 0x9E3779B97F4A7C15ULL + 1));
}

std::string label(const std::string& what, const std::string& key, double v) {
  std::ostringstream s;
  s << what << '[' << key << '=' << v << ']';
  return s.str();
}

void log(const RunOptions& opt, const std::string& msg) {
  if (opt.log) opt.log(msg);
}

void require_c(double c, double lo, double hi, const char* what) {
  if (!(c > lo && c < hi)) throw ConfigError(std::string(what) + ": c outside its domain");
}

ReportRow upper_bound_row(std::string criterion, double statistic, double bound) {
  return {std::move(criterion), statistic, 0.0, bound, statistic < bound};
}

// Row for |statistic - target| <= tolerance.
ReportRow band_row(std::string criterion, double statistic, double target, double tolerance) {
  return {std::move(criterion), statistic, target, tolerance, std::fabs(statistic - target) <= tolerance};
}

// Pass when every consecutive difference is negative; statistic is the
// largest difference.
ReportRow decreasing_row(std::string criterion, const std::vector<double>& values) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) worst = std::max(worst, values[i + 1] - values[i]);
  return {std::move(criterion), worst, 0.0, 0.0, worst < 0.0};
}

ReportRow info_row(std::string criterion, double statistic) {
  return {std::move(criterion), statistic, 0.0, std::numeric_limits<double>::infinity(), std::isfinite(statistic)};
}

double ks_against(const std::vector<double>& samples, const stable::StableParams& law, ExperimentReport& report,
                  const std::string& tag) {
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const stable::CdfTable table(law, *lo, *hi);
  report.rows.push_back(upper_bound_row(tag + ".cdf_table_error", table.estimated_error(), 1e-6));
  return ks_statistic(samples, [&](double x) { return table(x); });
}

std::vector<int> ns_or(const ExperimentConfig& cfg, std::vector<int> def) { return cfg.n ? *cfg.n : def; }

// --- experiments ---------------------------------------------------------

void stable_match(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto cs = cfg.c_grid.value_or(std::vector<double>{0.30, 0.35, 0.40, 0.45});
  const std::size_t trials = cfg.trials.value_or(100000);
  const double A = cfg.A.value_or(1e4);
  const double tol = cfg.tol.value_or(0.01);
  par = {{"c_grid", cs}, {"trials", trials}, {"A", A}, {"tol", tol}};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double c = cs[i];
    require_c(c, 0.25, 0.5, "stable-match");
    log(opt, "stable-match: c = " + format_double(c));
    const auto xs = run_trials(
        trials, stream_seed(opt.master_seed, i), [&](std::size_t, Rng& rng) { return poisson::H_sample(c, A, rng); },
        opt.execution);
    const std::string tag = label("ks", "c", c);
    rep.rows.push_back(upper_bound_row(tag, ks_against(xs, stable::params_for_H(c), rep, tag), tol));
  }
}

void z0_match(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const std::size_t trials = cfg.trials.value_or(100000);
  const double A = cfg.A.value_or(1e4);
  const double tol = cfg.tol.value_or(0.01);
  par = {{"trials", trials}, {"A", A}, {"tol", tol}};
  const auto xs = run_trials(
      trials, stream_seed(opt.master_seed, 0), [&](std::size_t, Rng& rng) { return poisson::Z0_sample(A, rng); },
      opt.execution);
  rep.rows.push_back(upper_bound_row("ks[Z0]", ks_against(xs, stable::params_for_Z0(), rep, "ks[Z0]"), tol));
}

std::vector<Lattice> lattices(int n, std::uint64_t p, std::size_t count, const RunOptions& opt) {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!is_prime(p)) throw ConfigError("p must be prime");
  return hecke_batch(n, p, opt.master_seed, count, opt.cache_dir);
}

void epstein_vs_limit(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto ns = ns_or(cfg, {8, 16, 24});
  const std::uint64_t p = cfg.p.value_or(kLargePrime);
  const std::size_t trials = cfg.trials.value_or(2000);
  const auto cs = cfg.c_grid.value_or(std::vector<double>{0.35});
  const double tol = cfg.tol.value_or(1e-2);
  par = {{"n", ns}, {"p", p}, {"trials", trials}, {"c_grid", cs}, {"tol", tol}};
  for (double c : cs) require_c(c, 0.25, 0.5, "epstein-vs-limit");
  std::vector<std::vector<double>> ks(cs.size());
  for (int n : ns) {
    log(opt, "epstein-vs-limit: n = " + std::to_string(n));
    const auto lats = lattices(n, p, trials, opt);
    // One evaluator per lattice serves every c.
    const auto values = run_trials(
        lats.size(), opt.master_seed,
        [&](std::size_t t, Rng&) {
          EpsteinEvaluator ev(lats[t]);
          std::vector<double> v;
          for (double c : cs) v.push_back(ev.E_normalized(c, tol));
          return v;
        },
        opt.execution);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      std::vector<double> xs;
      for (const auto& v : values) xs.push_back(v[j]);
      std::ostringstream tag;
      tag << "ks[n=" << n << ",c=" << cs[j] << ']';
      const double d = ks_against(xs, stable::params_for_H(cs[j]), rep, tag.str());
      rep.rows.push_back(info_row(tag.str(), d));
      ks[j].push_back(d);
    }
  }
  for (std::size_t j = 0; j < cs.size(); ++j)
    rep.rows.push_back(decreasing_row(label("ks_decreasing_in_n", "c", cs[j]), ks[j]));
}

void height_limit(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto ns = ns_or(cfg, {8, 16, 24});
  const std::uint64_t p = cfg.p.value_or(kLargePrime);
  const std::size_t trials = cfg.trials.value_or(2000);
  const double tol = cfg.tol.value_or(1e-2);
  const double mean_band = 0.15;
  par = {{"n", ns}, {"p", p}, {"trials", trials}, {"tol", tol}, {"mean_band", mean_band}};
  const auto law = stable::affine(stable::params_for_Z0(), 2.0, -kLogPi - 1.0);
  std::vector<double> ks;
  double last_mean = 0;
  for (int n : ns) {
    log(opt, "height-limit: n = " + std::to_string(n));
    const auto lats = lattices(n, p, trials, opt);
    const auto hs = run_trials(
        lats.size(), opt.master_seed,
        [&](std::size_t t, Rng&) {
          EpsteinEvaluator ev(lats[t]);
          return ev.height(tol / n);
        },
        opt.execution);
    std::vector<double> stat(hs.size());
    double mean = 0;
    for (std::size_t t = 0; t < hs.size(); ++t) {
      stat[t] = n * (hs[t] - height_limit_constant()) + std::log(static_cast<double>(n));
      mean += hs[t];
    }
    last_mean = mean / static_cast<double>(hs.size());
    const std::string tag = "ks[n=" + std::to_string(n) + "]";
    ks.push_back(ks_against(stat, law, rep, tag));
    rep.rows.push_back(info_row(tag, ks.back()));
    rep.rows.push_back(info_row("mean_height[n=" + std::to_string(n) + "]", last_mean));
  }
  rep.rows.push_back(decreasing_row("ks_decreasing_in_n", ks));
  rep.rows.push_back(band_row("mean_height_near_limit[n=" + std::to_string(ns.back()) + "]", last_mean,
                              height_limit_constant(), mean_band));
}

void negativity(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto c1s = cfg.c_grid.value_or(std::vector<double>{0.35, 0.30, 0.27});
  poisson::NegativityOptions no;
  no.trials = cfg.trials.value_or(100000);
  no.A = cfg.A.value_or(1e4);
  no.grid_step = cfg.grid_step.value_or(2e-3);
  no.master_seed = stream_seed(opt.master_seed, 0);
  no.execution = opt.execution;
  par = {{"c_grid", c1s}, {"c2", 0.5}, {"trials", no.trials}, {"A", no.A}, {"grid_step", no.grid_step}};
  std::vector<poisson::NegativityEstimate> est;
  for (double c1 : c1s) {
    require_c(c1, 0.25, 0.5, "negativity");
    log(opt, "negativity: c1 = " + format_double(c1));
    est.push_back(poisson::negativity_probability(c1, 0.5, no));
    const auto& e = est.back();
    // Strictly inside (0, 1) with the 95% interval excluding both ends.
    rep.rows.push_back({label("f_in_open_unit_interval", "c1", c1), e.estimate, 0.5, 0.5,
                        e.ci_low > 0.0 && e.ci_high < 1.0});
  }
  // Decrease as c1 goes down the grid, up to the overlap of the intervals.
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    const double slack = (est[i].ci_high - est[i].ci_low + est[i + 1].ci_high - est[i + 1].ci_low) / 2.0;
    worst = std::max(worst, est[i + 1].estimate - est[i].estimate - slack);
  }
  if (est.size() > 1) rep.rows.push_back({"f_decreasing_within_ci", worst, 0.0, 0.0, worst <= 0.0});
}

void gaussian_limit(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto cs = cfg.c_grid.value_or(std::vector<double>{0.40, 0.32, 0.27, 0.26});
  const std::size_t trials = cfg.trials.value_or(100000);
  const double A = cfg.A.value_or(1e4);
  const double threshold = cfg.tol.value_or(kGaussianThreshold);
  if (cs.size() < 2) throw ConfigError("gaussian-limit: c_grid needs at least 2 entries");
  par = {{"c_grid", cs}, {"trials", trials}, {"A", A}, {"tol", threshold}};
  std::vector<double> ks;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double c = cs[i];
    require_c(c, 0.25, 0.5, "gaussian-limit");
    log(opt, "gaussian-limit: c = " + format_double(c));
    const auto xs = run_trials(
        trials, stream_seed(opt.master_seed, i),
        [&](std::size_t, Rng& rng) { return poisson::gaussian_rescaled_sample(c, A, rng); }, opt.execution);
    ks.push_back(ks_statistic(xs, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }));
    rep.rows.push_back(info_row(label("ks", "c", c), ks.back()));
  }
  // Trend over all but the last entry, threshold at the last one.
  rep.rows.push_back(decreasing_row("ks_decreasing", std::vector<double>(ks.begin(), ks.end() - 1)));
  rep.rows.push_back(upper_bound_row(label("ks_below_threshold", "c", cs.back()), ks.back(), threshold));
}

void variance_bound(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const int n = ns_or(cfg, {8}).front();
  const double A = cfg.A.value_or(10.0);
  const double delta = 2.0;
  const std::size_t trials = cfg.trials.value_or(2000);
  const std::uint64_t p = cfg.p.value_or(kLargePrime);
  if (n < 3) throw ConfigError("variance-bound: n must be >= 3");
  par = {{"n", n}, {"A", A}, {"delta", delta}, {"trials", trials}, {"p", p}};

  double worst = 0;
  for (int m = 3; m <= 12; ++m) {
    for (double a : {0.0, 1.0, 10.0, 100.0}) {
      for (double d : {0.5, 1.0, 5.0}) worst = std::max(worst, rogers_second_moment(m, a, d) / d);
    }
  }
  rep.rows.push_back(upper_bound_row("max_exact_over_delta[grid]", worst, 5.0));

  log(opt, "variance-bound: Monte Carlo over " + std::to_string(trials) + " lattices");
  const auto lats = lattices(n, p, trials, opt);
  const auto sq = run_trials(
      lats.size(), opt.master_seed,
      [&](std::size_t t, Rng&) {
        const auto vl = vector_lengths(lats[t], A + delta);
        const double diff = counting_functions(vl, A + delta).R - counting_functions(vl, A).R;
        return diff * diff;
      },
      opt.execution);
  const auto m = moment_estimator(sq, 1);
  const double exact = rogers_second_moment(n, A, delta);
  rep.rows.push_back(info_row("exact", exact));
  rep.rows.push_back(band_row("mc_second_moment", m.estimate, exact, 3.0 * m.standard_error));
  rep.rows.push_back(upper_bound_row("mc_over_delta", m.estimate / delta, 5.0));
}

void siegel_check(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const int n = ns_or(cfg, {8}).front();
  const std::uint64_t p = cfg.p.value_or(65537);
  const std::size_t trials = cfg.trials.value_or(10000);
  const std::vector<double> Vs{1.0, 5.0, 10.0};
  par = {{"n", n}, {"p", p}, {"trials", trials}, {"V", Vs}};
  const auto lats = lattices(n, p, trials, opt);
  const double vmax = Vs.back();
  const auto counts = run_trials(
      lats.size(), opt.master_seed,
      [&](std::size_t t, Rng&) {
        const auto vl = vector_lengths(lats[t], vmax);
        std::vector<double> c;
        for (double V : Vs) c.push_back(static_cast<double>(counting_functions(vl, V).N));
        return c;
      },
      opt.execution);
  for (std::size_t j = 0; j < Vs.size(); ++j) {
    std::vector<double> xs;
    for (const auto& c : counts) xs.push_back(c[j]);
    const auto m = moment_estimator(xs, 1);
    rep.rows.push_back(band_row(label("mean_N", "V", Vs[j]), m.estimate, Vs[j], 3.0 * m.standard_error));
    // Same mean against the exact finite-p Hecke average, which separates
    // sampler bias from the discreteness of small p.
    rep.rows.push_back(band_row(label("mean_N_vs_hecke_exact", "V", Vs[j]), m.estimate,
                                hecke_expected_count(n, p, Vs[j]), 3.0 * m.standard_error));
  }
}

void moments(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentReport& rep, json& par) {
  const auto cs = cfg.c_grid.value_or(std::vector<double>{0.35});
  const std::size_t trials = cfg.trials.value_or(100000);
  const double A = cfg.A.value_or(1e4);
  const double delta = 1.0;
  const int kmax = 4;
  par = {{"c_grid", cs}, {"trials", trials}, {"A", A}, {"delta", delta}, {"k_max", kmax}};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double c = cs[i];
    require_c(c, 0.25, 0.5, "moments");
    const auto xs = run_trials(
        trials, stream_seed(opt.master_seed, i),
        [&](std::size_t, Rng& rng) { return poisson::H_delta_sample(c, delta, A, rng); }, opt.execution);
    const auto cum = poisson::tail_cumulants(c, A);
    const double bias = std::fabs(cum.kappa3) + std::fabs(cum.kappa4);
    for (int k = 1; k <= kmax; ++k) {
      const auto m = moment_estimator(xs, k);
      const double exact = poisson::moments_exact(std::vector<double>(k, c), delta);
      std::ostringstream tag;
      tag << "moment[k=" << k << ",c=" << c << ']';
      rep.rows.push_back(band_row(tag.str(), m.estimate, exact, 3.0 * m.standard_error + bias));
    }
  }
}

using Runner = void (*)(const ExperimentConfig&, const RunOptions&, ExperimentReport&, json&);

struct Entry {
  const char* name;
  Runner run;
  const char* defaults;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {"stable-match", stable_match, "c_grid=[0.30,0.35,0.40,0.45] trials=100000 A=1e4 tol=0.01 (KS bound)"},
      {"z0-match", z0_match, "trials=100000 A=1e4 tol=0.01 (KS bound)"},
      {"epstein-vs-limit", epstein_vs_limit, "n=[8,16,24] p=2147483647 trials=2000 c_grid=[0.35] tol=1e-2"},
      {"height-limit", height_limit, "n=[8,16,24] p=2147483647 trials=2000 tol=1e-2; mean band 0.15"},
      {"negativity", negativity, "c_grid=[0.35,0.30,0.27] (values of c1, c2=1/2) trials=100000 A=1e4 grid_step=2e-3"},
      {"gaussian-limit", gaussian_limit, "c_grid=[0.40,0.32,0.27,0.26] trials=100000 A=1e4 tol=0.05 (threshold)"},
      {"variance-bound", variance_bound, "n=8 A=10 (delta=2) trials=2000 p=2147483647"},
      {"siegel-check", siegel_check, "n=8 p=65537 trials=10000 (V in {1,5,10})"},
      {"moments", moments, "c_grid=[0.35] trials=100000 A=1e4 (delta=1, k<=4)"},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::string describe_experiments() {
  std::string out;
  for (const auto& e : registry()) out += std::string("  ") + e.name + ": " + e.defaults + "\n";
  return out;
}

ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config, const RunOptions& options) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return name == e.name; });
  if (it == reg.end()) throw ConfigError("unknown experiment '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.name = name;
  report.master_seed = options.master_seed;
  json par = json::object();
  it->run(config, options, report, par);
  report.parameters_json = par.dump();
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace epstein_lab::harness
