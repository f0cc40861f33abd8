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
#include <cmath>
#include <vector>

#include "epstein_lab/error.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/specfun.hpp"

namespace epstein_lab::harness {
namespace {

// Direct summation below this many terms, Hurwitz differences above.
constexpr long kDirectTerms = 48;
constexpr double kMaxD1 = 1e6;
constexpr double kRelTol = 1e-12;

}  // namespace

// 2 delta + 4/zeta(n) sum_{1 <= d1 < d2 < rho d1} d1^{-n} ((d1/d2)^n (A + delta) - A),
// rho = (1 + delta/A)^{1/n}.
double rogers_second_moment(int n, double A, double delta) {
  if (n < 3) throw DomainError("rogers_second_moment: n must be >= 3");
  if (!(A >= 0) || !std::isfinite(A)) throw DomainError("rogers_second_moment: A must be >= 0");
  if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("rogers_second_moment: delta must be > 0");
  const double zn = zeta_int(n);
  // No constraint on d2: sum_{d1 < d2} d2^{-n} = zeta(n-1) - zeta(n).
  if (A == 0) return delta * (2.0 + 4.0 * (zeta_int(n - 1) - zn) / zn);

  const double log_ratio = std::log1p(delta / A);
  const double eps = std::expm1(log_ratio / n);  // rho - 1
  // Continuum value of the inner sum per unit d1^{1-n}, used for the tail in d1:
  // (A + delta) int_1^rho x^{-n} dx - A (rho - 1).
  const double c_inf = (delta - n * A * eps) / (n - 1.0);
  // The tail beyond D is replaced by c_inf zeta(n-1, D+1); its error is of
  // order (2A + delta) D^{1-n} / (n-1).
  const double target = kRelTol * 2.0 * delta;
  const double D = std::min(kMaxD1, std::ceil(std::pow((2.0 * A + delta) / ((n - 1.0) * target), 1.0 / (n - 1.0))));
  const long d1_max = std::max(1L, static_cast<long>(D));

  double sum = 0;
  for (long d1 = 1; d1 <= d1_max; ++d1) {
    const double lim = eps * static_cast<double>(d1);
    // d2 - d1 = 1, ..., K with K < eps d1.
    const long K = static_cast<long>(std::ceil(lim)) - 1;
    if (K < 1) continue;
    const double x1 = static_cast<double>(d1);
    const double inv_d1n = std::pow(x1, -n);
    if (K <= kDirectTerms) {
      double inner = 0;
      for (long k = 1; k <= K; ++k)
        inner += std::expm1(log_ratio - n * std::log1p(static_cast<double>(k) / x1));
      sum += A * inv_d1n * inner;
    } else {
      const double s2 = hurwitz_zeta(n, x1 + 1.0) - hurwitz_zeta(n, x1 + static_cast<double>(K) + 1.0);
      sum += (A + delta) * s2 - A * static_cast<double>(K) * inv_d1n;
    }
  }
  if (c_inf > 0) sum += c_inf * hurwitz_zeta(n - 1, static_cast<double>(d1_max) + 1.0);
  return 2.0 * delta + 4.0 / zn * sum;
}

double hecke_expected_count(int n, std::uint64_t p, double V) {
  if (n < 2) throw DomainError("hecke_expected_count: n must be >= 2");
  if (!is_prime(p)) throw DomainError("hecke_expected_count: p must be prime");
  if (!(V > 0)) throw DomainError("hecke_expected_count: V must be > 0");
  const BallGeometry ball = ball_geometry(n);
  const double pd = static_cast<double>(p);
  // Squared radius in the unscaled lattice Z^n.
  const double rho2 = std::exp((2.0 / n) * (std::log(V) - ball.log_volume + std::log(pd)));
  const long K = static_cast<long>(std::floor(rho2 * (1.0 + 1e-14)));
  if (K > 200000) throw ResourceError("hecke_expected_count: squared radius too large");
  // r[k] = #{m in Z^n : |m|^2 = k}, by convolving one coordinate at a time.
  std::vector<double> r(K + 1, 0.0);
  r[0] = 1.0;
  for (int d = 0; d < n; ++d) {
    std::vector<double> next(K + 1, 0.0);
    for (long k = 0; k <= K; ++k) {
      if (r[k] == 0.0) continue;
      for (long x = 0; k + x * x <= K; ++x) next[k + x * x] += (x == 0 ? 1.0 : 2.0) * r[k];
    }
    r.swap(next);
  }
  // A vector outside p Z^n lies in a uniformly chosen index-p sublattice with
  // probability (p^{n-1} - 1) / (p^n - 1); vectors of p Z^n always do.
  const long double w = (std::pow(static_cast<long double>(pd), n - 1) - 1.0L) /
                        (std::pow(static_cast<long double>(pd), n) - 1.0L);
  long double total = 0;
  for (long k = 1; k <= K; ++k) total += static_cast<long double>(r[k]) * w;
  const long double p2 = static_cast<long double>(pd) * pd;
  for (long k = 1; static_cast<long double>(k) * p2 <= static_cast<long double>(K); ++k)
    total += static_cast<long double>(r[k]) * (1.0L - w);
  return static_cast<double>(total);
}

}  // namespace epstein_lab::harness
