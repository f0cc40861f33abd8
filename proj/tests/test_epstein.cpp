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

#include "epstein_lab/epstein.hpp"
#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/specfun.hpp"
#include "oracles.hpp"

using namespace epstein_lab;
using doctest::Approx;

namespace {

constexpr std::uint64_t kBigPrime = 2147483647;

// E_2(Z^2, s) = 4 zeta(s) beta(s), evaluated to 30 digits with mpmath.
constexpr double kEZ2At08 = -13.199153366131226;
constexpr double kFZ2At13 = 2.6668004651672210;
constexpr double kEZ2At2 = 6.0268120396919401;

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

}  // namespace

TEST_SUITE("epstein") {

TEST_CASE("E at s = 0 is -1 and continuous there") {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& l : hecke_batch(n, 65537, 1, 5)) {
      CHECK(E_n_eval(l, 0.0, 1e-8).value == -1.0);
      const double slope = height(dual(l), 1e-6) - 2.0 * std::log(2.0 * kPi);
      CHECK(std::fabs(E_n_eval(l, 1e-9, 1e-9).value + 1.0 - 1e-9 * slope) < 1e-8);
    }
  }
}

TEST_CASE("E_1(Z, 1) = 2 zeta(2)") {
  const auto e = E_n_eval(Lattice::identity(1), 1.0, 1e-13);
  CHECK(std::fabs(e.value - 2.0 * oracles::zeta2_series()) < 1e-10);
  const auto d = direct_epstein_sum(Lattice::identity(1), 1.0, 1e7, 1e-5);
  CHECK(std::fabs(d.value - 2.0 * oracles::zeta2_series()) <= d.tail_bound + 1e-12);
}

TEST_CASE("H for Z at s = 0.3 against the direct series") {
  double direct = -1.0 / (0.5 - 0.3);
  for (int m = 12; m >= 1; --m) direct += 2.0 * G_incomplete(0.3, kPi * m * m);
  const auto h = H_n_eval(Lattice::identity(1), 0.3, 1e-12);
  CHECK(std::fabs(h.value - direct) < 1e-12);
}

TEST_CASE("F is the sum of the primal and dual H") {
  for (const auto& l : hecke_batch(5, 65537, 2, 5)) {
    const double s = 1.1;
    const auto f = F_n_eval(l, s, 1e-9);
    const auto hp = H_n_eval(l, s, 1e-10);
    const auto hd = H_n_eval(dual(l), 2.5 - s, 1e-10);
    CHECK(std::fabs(f.value - hp.value - hd.value) <= f.tail_bound + hp.tail_bound + hd.tail_bound);
  }
}

TEST_CASE("Z^2 against the closed form") {
  const Lattice z = Lattice::identity(2);
  CHECK(E_n_eval(z, 0.8, 1e-10).value == Approx(kEZ2At08).epsilon(1e-10));
  CHECK(E_n_normalized(z, 0.4, 1e-10) == Approx(std::pow(kPi, -0.8) * kEZ2At08).epsilon(1e-10));
  CHECK(F_n_eval(z, 1.3, 1e-10).value == Approx(kFZ2At13).epsilon(1e-10));
  // Direct summation in the convergent region.
  CHECK(E_n_eval(z, 2.0, 1e-10).value == Approx(kEZ2At2).epsilon(1e-10));
  const auto d = direct_epstein_sum(z, 2.0, 1000.0, 1e-3);
  CHECK(std::fabs(d.value - kEZ2At2) <= d.tail_bound);
  CHECK(std::fabs(d.value - kEZ2At2) < 1e-6);
}

TEST_CASE("Z^n is self-dual under the functional equation") {
  for (int n : {3, 4, 7}) {
    const Lattice z = Lattice::identity(n);
    for (double c : {0.1, 0.3, 0.45}) {
      const auto a = F_n_eval(z, c * n, 1e-10);
      const auto b = F_n_eval(z, (0.5 - c) * n, 1e-10);
      CHECK(std::fabs(a.value - b.value) <= a.tail_bound + b.tail_bound);
    }
  }
}

TEST_CASE("functional equation on random lattices") {
  for (int n = 2; n <= 10; ++n) {
    for (const auto& l : hecke_batch(n, kBigPrime, 3, 4)) {
      EpsteinEvaluator primal(l);
      EpsteinEvaluator dualev(dual(l));
      for (int k = 1; k <= 9; ++k) {
        const double s = 0.1 * k * n;
        if (k == 5) continue;
        const auto a = primal.F(s, 1e-8);
        const auto b = dualev.F(0.5 * n - s, 3e-9);
        CHECK(std::fabs(a.value - b.value) <= a.tail_bound + b.tail_bound);
      }
    }
  }
}

TEST_CASE("residue at the pole") {
  for (int n : {2, 5, 9}) {
    const double a = 0.5 * n;
    const double target = std::exp(a * kLogPi - log_gamma(a));
    for (const auto& l : hecke_batch(n, kBigPrime, 4, 3)) {
      const double h = 1e-4;
      const double up = h * E_n_eval(l, a + h, 1e-6).value;
      const double down = -h * E_n_eval(l, a - h, 1e-6).value;
      CHECK(0.5 * (up + down) == Approx(target).epsilon(1e-4));
    }
  }
  CHECK_THROWS_AS(E_n_eval(Lattice::identity(4), 2.0, 1e-6), DomainError);
}

TEST_CASE("direct sum agrees with the expansion at s = 0.75 n") {
  // Radii chosen to keep the enumeration near 10^6 vectors.
  const double radius[] = {0, 0, 560, 60, 20};
  for (int n = 2; n <= 4; ++n) {
    for (const auto& l : hecke_batch(n, kBigPrime, 5, 5)) {
      const double s = 0.75 * n;
      const auto d = direct_epstein_sum(l, s, radius[n], 1.0);
      const auto e = E_n_eval(l, s, 1e-8);
      CHECK(std::fabs(d.value - e.value) <= d.tail_bound + e.tail_bound);
      CHECK(std::fabs(d.value - e.value) < 1e-4 * std::fabs(e.value));
    }
  }
  CHECK_THROWS_AS(direct_epstein_sum(Lattice::identity(2), 1.0, 10.0, 1.0), DomainError);
}

TEST_CASE("Haar mean of H_8(., 3) is zero") {
  const auto lats = hecke_batch(8, kBigPrime, 6, 10000);
  const auto hs = run_trials(lats.size(), 6, [&](std::size_t t, Rng&) {
    return H_n_eval(lats[t], 3.0, 1e-4).value;
  });
  CHECK(std::fabs(mean(hs)) <= 3 * standard_error(hs));
}

TEST_CASE("Haar mean of the J-sum is 2/n") {
  const int n = 10;
  const auto lats = hecke_batch(n, kBigPrime, 7, 10000);
  const auto js = run_trials(lats.size(), 7, [&](std::size_t t, Rng&) {
    EpsteinEvaluator ev(lats[t]);
    return ev.G_sum(Side::kDual, 0.0, 1e-4).value;
  });
  CHECK(std::fabs(mean(js) - 2.0 / n) <= 3 * standard_error(js));
}

TEST_CASE("height against the derivative of E at s = 0") {
  for (int n : {4, 8}) {
    for (const auto& l : hecke_batch(n, kBigPrime, 8, 20)) {
      const Lattice d = dual(l);
      const double h = 1e-4;
      const double deriv = (E_n_eval(d, h, 1e-11).value - E_n_eval(d, -h, 1e-11).value) / (2 * h);
      CHECK(std::fabs(height(l, 1e-8) - (2 * std::log(2 * kPi) + deriv)) < 1e-5);
    }
  }
}

TEST_CASE("height statistic and E_hat at c = 1/2") {
  double prev = 1e9;
  for (int n : {12, 24}) {
    double worst = 0;
    for (const auto& l : hecke_batch(n, kBigPrime, 9, 3)) {
      EpsteinEvaluator ev(l);
      const double hs = ev.height_statistic(1e-4);
      const double eh = ev.E_hat(0.5, 1e-4);
      worst = std::max(worst, std::fabs(hs - (2 * eh - kLogPi - 1)));
      const double h = ev.height(1e-4 / n);
      CHECK(hs == Approx(n * (h - height_limit_constant()) + std::log(n)).epsilon(1e-12));
    }
    if (n == 24) CHECK(worst < 0.05);
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("E_hat is continuous at c = 1/2") {
  for (const auto& l : hecke_batch(12, kBigPrime, 10, 5)) {
    EpsteinEvaluator ev(l);
    const double at = ev.E_hat(0.5, 1e-7);
    const double d3 = std::fabs(ev.E_hat(0.5 - 1e-3, 1e-7) - at);
    const double d4 = std::fabs(ev.E_hat(0.5 - 1e-4, 1e-7) - at);
    CHECK(d4 < d3);
    CHECK(d4 < 1e-2);
  }
}

TEST_CASE("normalized E is finite on a c grid") {
  for (const auto& l : hecke_batch(12, kBigPrime, 11, 5)) {
    EpsteinEvaluator ev(l);
    for (int k = 0; k < 50; ++k) CHECK(std::isfinite(ev.E_normalized(0.3 + 0.15 * k / 49, 1e-4)));
  }
}

TEST_CASE("tail policy") {
  const auto l = hecke_batch(24, kBigPrime, 12, 1)[0];
  EpsteinOptions cert;
  cert.policy = TailPolicy::kCertified;
  CHECK_THROWS_AS(E_n_normalized(l, 0.35, 1e-9, cert), CutoffError);
  EpsteinOptions stat;
  stat.policy = TailPolicy::kStatistical;
  const double a = E_n_normalized(l, 0.35, 1e-2, stat);
  const double b = E_n_normalized(l, 0.35, 2e-3, stat);
  CHECK(std::fabs(a - b) < 1.2e-2);
}

}  // TEST_SUITE
