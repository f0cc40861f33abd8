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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/lattice.hpp"
#include "oracles.hpp"

using namespace epstein_lab;
using namespace epstein_lab::harness;
using doctest::Approx;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  return run_trials(n, seed, [](std::size_t, Rng& rng) { return std::normal_distribution<double>()(rng); });
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("KS of samples from the reference law") {
  const std::size_t N = 100000;
  CHECK(ks_statistic(normals(N, 1), Phi) < 1.95 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("KS degenerate cases") {
  const std::size_t N = 1000;
  CHECK(ks_statistic(std::vector<double>(N, 0.0), Phi) == Approx(0.5).epsilon(1.0 / N));
  auto step = [](double x) { return x >= 2.0 ? 1.0 : 0.0; };
  CHECK(ks_statistic(std::vector<double>(N, 2.0), step, CdfKind::kGeneral) <= 1.0 / N);
  CHECK_THROWS_AS(ks_statistic({1.0}, Phi), DomainError);
  CHECK_THROWS_AS(ks_statistic({1.0, std::numeric_limits<double>::quiet_NaN()}, Phi), DomainError);
}

TEST_CASE("KS against the O(N^2) oracle") {
  for (std::size_t N : {2u, 17u, 300u, 1000u}) {
    auto xs = normals(N, N);
    // Ties exercise the grouping.
    for (std::size_t i = 0; i + 3 < N; i += 4) xs[i + 1] = xs[i];
    CHECK(ks_statistic(xs, Phi) == oracles::ks_brute(xs, Phi));
  }
}

TEST_CASE("moment estimator") {
  const auto c = moment_estimator(std::vector<double>(50, 1.5), 2);
  CHECK(c.estimate == 2.25);
  CHECK(c.standard_error == 0.0);
  const auto m = moment_estimator(normals(100000, 2), 2);
  CHECK(std::fabs(m.estimate - 1.0) < 3 * m.standard_error);
  CHECK_THROWS_AS(moment_estimator(std::vector<double>(29, 1.0), 1), DomainError);
  CHECK_THROWS_AS(moment_estimator(std::vector<double>(30, 1.0), 0), DomainError);
}

TEST_CASE("Rogers second moment at A = 0") {
  for (int n : {4, 6, 9}) {
    const double closed = 3.0 * (2 + 4 * (zeta_int(n - 1) - zeta_int(n)) / zeta_int(n));
    CHECK(rogers_second_moment(n, 0, 3.0) == Approx(closed).epsilon(1e-14));
    CHECK(rogers_second_moment(n, 0, 3.0) == Approx(oracles::rogers_A0_direct(n, 3.0)).epsilon(1e-7));
  }
}

TEST_CASE("Rogers second moment for A > 0") {
  // Independent double-precision brute force of the same double sum.
  CHECK(rogers_second_moment(8, 1, 5) == Approx(10.0000076383477).epsilon(1e-12));
  for (auto [n, A, d] : {std::tuple{8, 10.0, 2.0}, std::tuple{5, 1.0, 0.5}, std::tuple{12, 100.0, 5.0}})
    CHECK(rogers_second_moment(n, A, d) == Approx(oracles::rogers_direct(n, A, d)).epsilon(1e-9));
  // Only d1 with (d1 + 1) / d1 < (1 + delta / A)^{1/n} contribute; none for large A.
  CHECK(rogers_second_moment(8, 1e6, 2) == Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(rogers_second_moment(2, 1, 1), DomainError);
  CHECK_THROWS_AS(rogers_second_moment(5, 1, 0), DomainError);
}

TEST_CASE("Rogers second moment stays below 5 delta") {
  for (int n = 3; n <= 12; ++n)
    for (double A : {0.0, 1.0, 10.0, 100.0})
      for (double d : {0.5, 1.0, 5.0}) CHECK(rogers_second_moment(n, A, d) < 5 * d);
}

TEST_CASE("exact Hecke mean count against all sublattices") {
  for (auto [n, p] : {std::pair{2, 5}, std::pair{3, 3}, std::pair{4, 2}}) {
    // All normalized functionals: last non-zero entry 1.
    std::vector<std::vector<std::int64_t>> fs;
    for (int pivot = 0; pivot < n; ++pivot) {
      const int free = pivot;
      long total = 1;
      for (int i = 0; i < free; ++i) total *= p;
      for (long code = 0; code < total; ++code) {
        std::vector<std::int64_t> a(n, 0);
        long c = code;
        for (int i = 0; i < free; ++i) {
          a[i] = c % p;
          c /= p;
        }
        a[pivot] = 1;
        fs.push_back(a);
      }
    }
    for (double V : {1.0, 4.0, 9.5}) {
      double sum = 0;
      for (const auto& a : fs) {
        const auto vl = vector_lengths(hecke_lattice(n, p, a), V);
        sum += counting_functions(vl, V).N;
      }
      CHECK(hecke_expected_count(n, p, V) == Approx(sum / fs.size()).epsilon(1e-12));
    }
  }
  // The finite-p mean approaches V at the rate of the ball lattice-point
  // error, relative size about (p / V)^{-2/n}.
  double prev = 1;
  for (std::uint64_t p : {65537ULL, 2147483647ULL, 4503599627370449ULL}) {
    const double rel = std::fabs(hecke_expected_count(8, p, 5.0) / 5.0 - 1.0);
    CHECK(rel < 2 * std::pow(p / 5.0, -0.25));
    CHECK(rel < prev);
    prev = rel;
  }
}

TEST_CASE("report serialization") {
  ExperimentReport r;
  r.name = "demo";
  r.master_seed = 7;
  r.rows.push_back({"ks[n=8,c=0.35]", 0.1, 0, 0.2, true});
  r.rows.push_back({"plain", 1.0 / 3, 0.5, std::numeric_limits<double>::infinity(), true});
  r.rows.push_back({"with \"quote\"", -2, 0, 0, false});
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("experiment,master_seed,criterion,statistic,target,tolerance,pass\r\n", 0) == 0);
  CHECK(csv.find("demo,7,\"ks[n=8,c=0.35]\",0.10000000000000001,0,0.20000000000000001,true\r\n") !=
        std::string::npos);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
  CHECK(csv.find("\"with \"\"quote\"\"\"") != std::string::npos);
  CHECK_FALSE(r.all_pass());
  const std::string js = to_json(r);
  CHECK(js.find("\"all_pass\"") != std::string::npos);
  CHECK(js.find("\"wall_time_seconds\"") != std::string::npos);
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("ab") == "ab");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"n": 8, "p": 65537, "trials": 10, "c_grid": [0.3, 0.4], "tol": 1e-3})");
  CHECK(*c.n == std::vector<int>{8});
  CHECK(*c.p == 65537);
  CHECK(*c.trials == 10);
  CHECK(*c.c_grid == std::vector<double>{0.3, 0.4});
  CHECK(*c.tol == 1e-3);
  CHECK_FALSE(c.A.has_value());
  CHECK(*parse_config(R"({"n": [8, 16]})").n == std::vector<int>{8, 16});
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trials": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  const auto keyed = parse_config_for(R"({"z0-match": {"trials": 50}, "moments": {"A": 10}})", "z0-match");
  CHECK(*keyed.trials == 50);
  CHECK_FALSE(keyed.A.has_value());
  CHECK_FALSE(parse_config_for(R"({"moments": {"A": 10}})", "z0-match").A.has_value());
}

TEST_CASE("experiments are registered and validated") {
  CHECK(experiment_names().size() == 9);
  CHECK_THROWS_AS(run_experiment("nope", {}, {}), ConfigError);
  ExperimentConfig bad;
  bad.c_grid = std::vector<double>{0.6};
  CHECK_THROWS_AS(run_experiment("stable-match", bad, {}), ConfigError);
}

TEST_CASE("same seed gives byte-identical CSV, serial or parallel") {
  ExperimentConfig cfg;
  cfg.trials = 2000;
  RunOptions par;
  par.master_seed = 42;
  RunOptions ser = par;
  ser.execution = Execution::kSerial;
  const auto a = to_csv(run_experiment("z0-match", cfg, par));
  const auto b = to_csv(run_experiment("z0-match", cfg, par));
  const auto c = to_csv(run_experiment("z0-match", cfg, ser));
  CHECK(a == b);
  CHECK(a == c);
  RunOptions other = par;
  other.master_seed = 43;
  CHECK(a != to_csv(run_experiment("z0-match", cfg, other)));
}

}  // TEST_SUITE
