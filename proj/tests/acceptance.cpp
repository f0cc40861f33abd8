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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Experiment reports go to --out as JSON and CSV.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "epstein_lab/epstein.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/poisson.hpp"
#include "epstein_lab/specfun.hpp"
#include "oracles.hpp"

using namespace epstein_lab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

struct Context {
  fs::path out_dir;
  fs::path cache_dir;
  std::uint64_t seed = 1;
  bool verbose = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

harness::ExperimentReport run(const Context& ctx, const std::string& name, const harness::ExperimentConfig& cfg = {},
                              const std::string& suffix = "") {
  harness::RunOptions opt;
  opt.master_seed = ctx.seed;
  opt.cache_dir = ctx.cache_dir;
  if (ctx.verbose) opt.log = [](const std::string& s) { std::cerr << "  " << s << '\n'; };
  const auto t0 = std::chrono::steady_clock::now();
  auto rep = harness::run_experiment(name, cfg, opt);
  rep.wall_time_seconds = seconds_since(t0);
  std::ofstream(ctx.out_dir / (name + suffix + ".json")) << harness::to_json(rep);
  std::ofstream(ctx.out_dir / (name + suffix + ".csv")) << harness::to_csv(rep);
  return rep;
}

// Every row whose criterion starts with prefix must pass; the detail lists them.
Outcome rows_outcome(const harness::ExperimentReport& rep, const std::vector<std::string>& prefixes) {
  Outcome o;
  Detail d;
  for (const auto& r : rep.rows) {
    bool match = prefixes.empty();
    for (const auto& p : prefixes) match = match || r.criterion.rfind(p, 0) == 0;
    if (!match) continue;
    o.pass = o.pass && r.pass;
    d << r.criterion << '=' << harness::format_double(r.statistic) << (r.pass ? "" : "(fail)") << ' ';
  }
  d << "[" << rep.wall_time_seconds << " s]";
  o.detail = d.str();
  return o;
}

void runtime_limit(Outcome& o, const harness::ExperimentReport& rep, double limit) {
  if (rep.wall_time_seconds >= limit) {
    o.pass = false;
    o.detail += " runtime above " + std::to_string(static_cast<int>(limit)) + " s";
  }
}

Outcome analytic_anchors(const Context&) {
  Outcome o;
  double worst_zero = 0, fe_excess = -1e300, worst_residue = 0;
  for (int n = 2; n <= 8; ++n) {
    const auto lats = hecke_batch(n, 2147483647, 101, 100 / 7 + 1);
    for (const auto& l : lats) {
      worst_zero = std::max(worst_zero, std::fabs(E_n_eval(l, 0.0, 1e-8).value + 1.0));
      // Just off s = 0 through the general path: E(L, eps) = -1 + eps E'(L, 0) + O(eps^2),
      // with E'(L, 0) = h_n(L*) - 2 log(2 pi).
      const double eps = 1e-9;
      const double slope = height(dual(l), 1e-6) - 2.0 * std::log(2.0 * kPi);
      worst_zero = std::max(worst_zero, std::fabs(E_n_eval(l, eps, 1e-9).value + 1.0 - eps * slope));
    }
  }
  // Functional equation with independent evaluators for L and L*.
  for (int n = 2; n <= 10; ++n) {
    for (const auto& l : hecke_batch(n, 2147483647, 102, 12)) {
      EpsteinEvaluator primal(l);
      EpsteinEvaluator dualev(dual(l));
      for (int k = 1; k <= 9; ++k) {
        if (k == 5) continue;
        const double s = 0.1 * k * n;
        const auto a = primal.F(s, 1e-8);
        const auto b = dualev.F(0.5 * n - s, 3e-9);
        fe_excess = std::max(fe_excess, std::fabs(a.value - b.value) - (a.tail_bound + b.tail_bound));
      }
    }
  }
  for (int n : {2, 3, 5, 8}) {
    const double a = 0.5 * n;
    const double target = std::exp(a * kLogPi - log_gamma(a));
    for (const auto& l : hecke_batch(n, 2147483647, 103, 5)) {
      const double h = 1e-4;
      const double r = 0.5 * (h * E_n_eval(l, a + h, 1e-6).value - h * E_n_eval(l, a - h, 1e-6).value);
      worst_residue = std::max(worst_residue, std::fabs(r / target - 1.0));
    }
  }
  o.pass = worst_zero <= 1e-8 && fe_excess <= 0 && worst_residue < 1e-4;
  Detail d;
  d << "max|E(L,0)+1|,max|E(L,1e-9)+1-1e-9 E'(L,0)|=" << worst_zero << " fe_residual_minus_bounds=" << fe_excess
    << " residue_rel_err=" << worst_residue;
  o.detail = d.str();
  return o;
}

Outcome zeta2(const Context&) {
  const double e = E_n_eval(Lattice::identity(1), 1.0, 1e-13).value;
  const double err = std::fabs(e - 2.0 * oracles::zeta2_series());
  Detail d;
  d << "|E_1(Z,1) - 2 zeta(2)|=" << err;
  return {err < 1e-10, d.str()};
}

Outcome lemma_int(const Context&) {
  double worst = 0;
  for (int n : {2, 5, 10})
    for (double c : {0.3, 0.45}) {
      const double s = c * n;
      const double q = oracles::lemma_int_quadrature(n, s);
      worst = std::max(worst, std::fabs(q * (0.5 * n - s) - 1.0));
    }
  Detail d;
  d << "max relative error=" << worst;
  return {worst < 1e-6, d.str()};
}

Outcome siegel(const Context& ctx) {
  const auto rep = run(ctx, "siegel-check");
  Outcome o = rows_outcome(rep, {"mean_N["});
  runtime_limit(o, rep, 300);
  // Context for a failure: the exact finite-p Hecke mean and a large prime.
  const auto exact = rows_outcome(rep, {"mean_N_vs_hecke_exact"});
  harness::ExperimentConfig big;
  big.p = 2147483647;
  const auto large = rows_outcome(run(ctx, "siegel-check", big, "-p2147483647"), {"mean_N["});
  o.detail += " | vs exact p=65537 Hecke mean: " + std::string(exact.pass ? "pass" : "fail") +
              " | p=2^31-1: " + std::string(large.pass ? "pass" : "fail");
  return o;
}

Outcome rogers(const Context& ctx) { return rows_outcome(run(ctx, "variance-bound"), {}); }

Outcome stable_match(const Context& ctx) {
  const auto rep = run(ctx, "stable-match");
  Outcome o = rows_outcome(rep, {"ks[c="});
  runtime_limit(o, rep, 600);
  return o;
}

Outcome z0_match(const Context& ctx) { return rows_outcome(run(ctx, "z0-match"), {}); }

Outcome moments(const Context& ctx) { return rows_outcome(run(ctx, "moments"), {}); }

Outcome gaussian(const Context& ctx) {
  return rows_outcome(run(ctx, "gaussian-limit"), {"ks_decreasing", "ks_below_threshold"});
}

Outcome epstein_limit(const Context& ctx) {
  const auto rep = run(ctx, "epstein-vs-limit");
  Outcome o = rows_outcome(rep, {"ks[n=", "ks_decreasing"});
  runtime_limit(o, rep, 3600);
  return o;
}

Outcome height_limit(const Context& ctx) {
  return rows_outcome(run(ctx, "height-limit"), {"ks[n=", "ks_decreasing", "mean_height"});
}

Outcome negativity(const Context& ctx) { return rows_outcome(run(ctx, "negativity"), {}); }

Outcome oracle_equivalence(const Context&) {
  int lattice_mismatch = 0, ks_mismatch = 0, partition_mismatch = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      Rng rng = trial_rng(104 + n, t);
      const std::uint64_t p = n <= 3 ? 1009 : 211;
      const Lattice l = hecke_sample(n, p, rng);
      const double radius = std::pow(12.0 / ball_geometry(n).volume, 1.0 / n);
      if (oracles::hecke_enumerated_vectors(l, radius) !=
          oracles::hecke_box_vectors(n, p, l.provenance()->hecke, radius))
        ++lattice_mismatch;
    }
  }
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  for (std::size_t N : {2u, 10u, 100u, 500u, 1000u}) {
    auto xs = run_trials(N, 105 + N, [](std::size_t, Rng& rng) { return std::normal_distribution<double>()(rng); });
    for (std::size_t i = 0; i + 3 < N; i += 5) xs[i + 2] = xs[i];
    if (harness::ks_statistic(xs, Phi) != oracles::ks_brute(xs, Phi)) ++ks_mismatch;
  }
  for (int k = 0; k <= 8; ++k) {
    auto got = poisson::partitions_no_singletons(k);
    for (auto& part : got) std::sort(part.begin(), part.end());
    const auto want = oracles::partitions_brute(k);
    if (std::set<poisson::Partition>(got.begin(), got.end()) !=
            std::set<poisson::Partition>(want.begin(), want.end()) ||
        got.size() != want.size())
      ++partition_mismatch;
  }
  Detail d;
  d << "enumeration mismatches=" << lattice_mismatch << "/50 ks mismatches=" << ks_mismatch
    << "/5 partition mismatches=" << partition_mismatch << "/9";
  return {lattice_mismatch + ks_mismatch + partition_mismatch == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epstein-lab acceptance suite"};
  Context ctx;
  std::string out = "acceptance-out", cache = "acceptance-cache";
  std::vector<int> only;
  app.add_option("--out", out, "Directory for experiment reports");
  app.add_option("--cache-dir", cache, "Lattice cache directory");
  app.add_option("--seed", ctx.seed, "Master seed");
  app.add_option("--only", only, "Run only these criterion numbers");
  app.add_flag("--verbose", ctx.verbose, "Progress lines on stderr");
  CLI11_PARSE(app, argc, argv);
  ctx.out_dir = out;
  ctx.cache_dir = cache;
  fs::create_directories(ctx.out_dir);
  fs::create_directories(ctx.cache_dir);

  const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> criteria = {
      {"analytic anchors", analytic_anchors},
      {"E_1(Z,1) = 2 zeta(2)", zeta2},
      {"integral of G over R^n", lemma_int},
      {"Siegel mean, n=8 p=65537", siegel},
      {"Rogers variance", rogers},
      {"stable law of H(c)", stable_match},
      {"stable law of Z_0", z0_match},
      {"moments of H(c,1)", moments},
      {"Gaussian limit", gaussian},
      {"normalized Epstein vs stable law", epstein_limit},
      {"height limit", height_limit},
      {"negativity probability", negativity},
      {"oracle equivalence", oracle_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s: %s: %s (%.1f s)\n", number, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
