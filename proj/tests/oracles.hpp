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

// Slow, independent reference implementations used by the unit tests and the
// acceptance binary.

#ifndef EPSTEIN_LAB_TESTS_ORACLES_HPP
#define EPSTEIN_LAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/specfun.hpp"

namespace oracles {

using IntVec = std::vector<std::int64_t>;

// Canonical representative of +-v: first non-zero entry positive.
inline IntVec canonical(IntVec v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

// Non-zero m in Z^n with a.m = 0 mod p and |m|^2 p^{-2/n} <= radius^2, one
// per +- pair, found by scanning the whole box |m_i| <= radius p^{1/n}.
inline std::set<IntVec> hecke_box_vectors(int n, std::uint64_t p, const IntVec& a, double radius) {
  const double scale2 = std::pow(static_cast<double>(p), 2.0 / n);
  const double bound = radius * radius * scale2 * (1 + 1e-12);
  const auto w = static_cast<std::int64_t>(std::floor(std::sqrt(bound)));
  std::set<IntVec> out;
  IntVec m(n, -w);
  const auto P = static_cast<std::int64_t>(p);
  while (true) {
    std::int64_t sq = 0, dot = 0;
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      sq += m[i] * m[i];
      dot = ((dot + (a[i] % P) * (((m[i] % P) + P) % P)) % P + P) % P;
      zero = zero && m[i] == 0;
    }
    if (!zero && sq <= bound && dot == 0) out.insert(canonical(m));
    int i = 0;
    while (i < n && m[i] == w) m[i++] = -w;
    if (i == n) break;
    ++m[i];
  }
  return out;
}

// The same set from the library enumeration, mapped to Z^n coordinates
// through the integral form of the Hecke lattice.
inline std::set<IntVec> hecke_enumerated_vectors(const epstein_lab::Lattice& lattice, double radius) {
  const auto& rows = lattice.integral_form()->rows;
  const int n = lattice.dim();
  std::set<IntVec> out;
  for (const auto& v : epstein_lab::vectors_within(lattice, radius)) {
    IntVec m(n, 0);
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i) m[c] += v.coeffs[i] * rows(i, c);
    out.insert(canonical(m));
  }
  return out;
}

// O(N^2) Kolmogorov-Smirnov distance at the sample points, continuous F.
inline double ks_brute(const std::vector<double>& xs, const std::function<double(double)>& F) {
  const double N = static_cast<double>(xs.size());
  double d = 0;
  for (double x : xs) {
    std::size_t le = 0, lt = 0;
    for (double y : xs) {
      le += y <= x;
      lt += y < x;
    }
    const double f = F(x);
    d = std::max({d, std::fabs(static_cast<double>(le) / N - f), std::fabs(f - static_cast<double>(lt) / N)});
  }
  return d;
}

// All set partitions of {0..k-1} from restricted growth strings, keeping those
// without singleton blocks; blocks ascending, partition sorted.
inline std::vector<std::vector<std::vector<int>>> partitions_brute(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> a(k, 0);
  while (true) {
    const int blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<std::vector<int>> part(blocks);
    for (int i = 0; i < k; ++i) part[a[i]].push_back(i);
    if (std::none_of(part.begin(), part.end(), [](const auto& b) { return b.size() == 1; })) {
      std::sort(part.begin(), part.end());
      out.push_back(part);
    }
    // Next restricted growth string: a[i] <= 1 + max(a[0..i-1]).
    int i = k - 1;
    for (; i > 0; --i) {
      const int mx = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= mx) break;
    }
    if (i == 0) break;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), 0);
  }
  return out;
}

// zeta(2) from the partial sum to M plus the Euler-Maclaurin tail.
inline double zeta2_series(int M = 100000) {
  double s = 0;
  for (int m = M; m >= 1; --m) s += 1.0 / (static_cast<double>(m) * m);
  const double x = M;
  return s + 1.0 / x - 1.0 / (2 * x * x) + 1.0 / (6 * x * x * x) - 1.0 / (30 * std::pow(x, 5));
}

// Rogers double sum for A = 0 by direct truncation at d2 <= D, with the tail
// sum_{d2 > D} (d2 - 1) d2^{-n} replaced by its integral.
inline double rogers_A0_direct(int n, double delta, int D = 4000) {
  double inner = 0;
  for (int d2 = D; d2 >= 2; --d2) {
    double col = 0;
    for (int d1 = 1; d1 < d2; ++d1) col += std::pow(static_cast<double>(d2), -n);
    inner += col;
  }
  const double x = D + 0.5;
  inner += std::pow(x, 2.0 - n) / (n - 2) - std::pow(x, 1.0 - n) / (n - 1);
  return delta * (2.0 + 4.0 / epstein_lab::zeta_int(n) * inner);
}

// Rogers double sum for A > 0, terms with d1 <= D1.
inline double rogers_direct(int n, double A, double delta, int D1 = 3000) {
  const double ratio = std::pow(1.0 + delta / A, 1.0 / n);
  double sum = 0;
  for (int d1 = D1; d1 >= 1; --d1) {
    const double x1 = d1;
    for (int d2 = d1 + 1; d2 < ratio * x1; ++d2)
      sum += std::pow(x1, -n) * (std::pow(x1 / d2, n) * (A + delta) - A);
  }
  return 2.0 * delta + 4.0 / epstein_lab::zeta_int(n) * sum;
}

// int_{R^n} G(s, pi |x|^2) dx in polar form, u = pi r^2:
// (1 / Gamma(n/2)) int_0^inf u^{n/2 - 1} G(s, u) du.
inline double lemma_int_quadrature(int n, double s) {
  const double a = 0.5 * n;
  auto f = [&](double u) {
    if (u <= 0) return 0.0;
    return std::exp((a - 1) * std::log(u) + epstein_lab::G_incomplete_log(s, u).log_abs);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double head = ts.integrate(f, 0.0, 1.0, 1e-14);
  const double tail = es.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-14);
  return (head + tail) / std::tgamma(a);
}

}  // namespace oracles

#endif  // EPSTEIN_LAB_TESTS_ORACLES_HPP
