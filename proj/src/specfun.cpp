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


#include "epstein_lab/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "epstein_lab/error.hpp"

namespace epstein_lab {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 200000;

// B_{2j} / (2j)! for j = 1..8.
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
}

// log gamma(s, x) for x < s + 1 via the power series.
double log_lower_gamma_series(double s, double x) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (del < sum * kEps) break;
  }
  return -x + s * std::log(x) + std::log(sum);
}

// Continued fraction h with Gamma(s, x) = e^{-x} x^s h, for x >= s + 1.
double upper_gamma_cf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Gamma(s, x) for -1 < s < 1/2, s != 0, and x < s + 1. Splits off the 1/s pole so
// that small s does not cancel catastrophically.
double upper_gamma_small_s(double s, double x) {
  const double lx = std::log(x);
  double head = std::expm1(log_gamma(1.0 + s)) / s - std::expm1(s * lx) / s;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x / k;
    const double t = term / (s + k);
    sum += t;
    if (std::fabs(t) < kEps * std::fabs(sum)) break;
  }
  return head - std::exp(s * lx) * sum;
}

void check_gx(double s, double x, const char* what) {
  require_finite(s, what);
  require_finite(x, what);
  if (s < 0.0) throw DomainError(std::string(what) + ": s must be >= 0");
  if (x <= 0.0) throw DomainError(std::string(what) + ": x must be > 0");
}

}  // namespace

LogValue LogValue::from_double(double v) {
  if (v == 0.0) return {};
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

LogValue LogValue::from_log(double log_abs, int sign) {
  if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
  return {sign > 0 ? 1 : -1, log_abs};
}

double LogValue::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

LogValue LogValue::inverse() const {
  if (sign == 0) throw DomainError("LogValue: inverse of zero");
  return {sign, -log_abs};
}

LogValue LogValue::pow(double e) const {
  if (sign == 0) {
    if (e > 0) return {};
    if (e == 0) return {1, 0.0};
    throw DomainError("LogValue: negative power of zero");
  }
  int s = 1;
  if (sign < 0) {
    if (e != std::floor(e)) throw DomainError("LogValue: non-integer power of a negative value");
    if (std::fmod(std::fabs(e), 2.0) == 1.0) s = -1;
  }
  return {s, e * log_abs};
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.log_abs + b.log_abs};
}

LogValue operator/(const LogValue& a, const LogValue& b) { return a * b.inverse(); }

LogValue operator+(const LogValue& a, const LogValue& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const LogValue& big = a.log_abs >= b.log_abs ? a : b;
  const LogValue& small = a.log_abs >= b.log_abs ? b : a;
  const double r = std::exp(small.log_abs - big.log_abs);
  if (big.sign == small.sign) return {big.sign, big.log_abs + std::log1p(r)};
  if (r == 1.0) return {};
  return {big.sign, big.log_abs + std::log1p(-r)};
}

double log_gamma(double x) {
  require_finite(x, "log_gamma");
  if (x <= 0.0) throw DomainError("log_gamma: x must be > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double digamma(double x) {
  require_finite(x, "digamma");
  if (x <= 0.0) throw DomainError("digamma: x must be > 0");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // sum_j B_{2j} / (2j) x^{-2j}
  const double series =
      inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 -
      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return result + std::log(x) - 0.5 / x - series;
}

double hurwitz_zeta(double s, double q) {
  require_finite(s, "hurwitz_zeta");
  require_finite(q, "hurwitz_zeta");
  if (s <= 1.0) throw DomainError("hurwitz_zeta: s must be > 1");
  if (q <= 0.0) throw DomainError("hurwitz_zeta: q must be > 0");
  constexpr int kN = 20;
  const double w = q + kN;
  // Euler-Maclaurin tail, smallest terms first.
  double tail = 0.0;
  {
    double terms[8];
    double rising = s;  // s (s+1) ... (s+2j-2)
    double wpow = std::pow(w, -s - 1.0);
    for (int j = 0; j < 8; ++j) {
      terms[j] = kBernoulliOverFactorial[j] * rising * wpow;
      rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
      wpow /= w * w;
    }
    for (int j = 7; j >= 0; --j) tail += terms[j];
  }
  tail += 0.5 * std::pow(w, -s);
  tail += std::pow(w, 1.0 - s) / (s - 1.0);
  double sum = tail;
  for (int k = kN - 1; k >= 0; --k) sum += std::pow(q + k, -s);
  return sum;
}

double zeta_int(int n) {
  if (n < 2) throw DomainError("zeta_int: n must be >= 2");
  return hurwitz_zeta(static_cast<double>(n), 1.0);
}

BallGeometry ball_geometry(int n) {
  if (n < 1) throw DomainError("ball_geometry: n must be >= 1");
  const double half = 0.5 * n;
  const double log_surface = kLog2 + half * kLogPi - log_gamma(half);
  const double log_volume = log_surface - std::log(static_cast<double>(n));
  return {std::exp(log_volume), std::exp(log_surface), log_volume, log_surface};
}

LogValue expint_e1(double x) {
  require_finite(x, "expint_e1");
  if (x <= 0.0) throw DomainError("expint_e1: x must be > 0");
  if (x <= 1.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < kMaxIter; ++k) {
      term *= -x / k;
      const double t = term / k;
      sum += t;
      if (std::fabs(t) < kEps * std::fabs(sum)) break;
    }
    return LogValue::from_double(-kEulerGamma - std::log(x) - sum);
  }
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return LogValue::from_log(-x + std::log(h));
}

LogValue upper_gamma(double s, double x) {
  check_gx(s, x, "upper_gamma");
  if (s == 0.0) return expint_e1(x);
  if (x >= s + 1.0) return LogValue::from_log(-x + s * std::log(x) + std::log(upper_gamma_cf(s, x)));
  if (s < 0.5) return LogValue::from_double(upper_gamma_small_s(s, x));
  const double lg = log_gamma(s);
  const double lower = log_lower_gamma_series(s, x);
  return LogValue::from_log(lg + std::log1p(-std::exp(lower - lg)));
}

LogValue regularized_q(double a, double x) {
  require_finite(a, "regularized_q");
  require_finite(x, "regularized_q");
  if (a <= 0.0) throw DomainError("regularized_q: a must be > 0");
  if (x < 0.0) throw DomainError("regularized_q: x must be >= 0");
  if (x == 0.0) return LogValue::from_log(0.0);
  return upper_gamma(a, x) / LogValue::from_log(log_gamma(a));
}

double regularized_p(double a, double x) {
  require_finite(a, "regularized_p");
  require_finite(x, "regularized_p");
  if (a <= 0.0) throw DomainError("regularized_p: a must be > 0");
  if (x < 0.0) throw DomainError("regularized_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::exp(log_lower_gamma_series(a, x) - log_gamma(a));
  return -std::expm1(regularized_q(a, x).log_abs);
}

LogValue G_incomplete_log(double s, double x) {
  check_gx(s, x, "G_incomplete");
  if (s == 0.0) return expint_e1(x);
  if (x >= s + 1.0) return LogValue::from_log(-x + std::log(upper_gamma_cf(s, x)));
  const LogValue g = upper_gamma(s, x);
  return {g.sign, g.log_abs - s * std::log(x)};
}

double G_incomplete(double s, double x) { return G_incomplete_log(s, x).to_double(); }

LogValue G_incomplete_ext(double s, double x) {
  require_finite(s, "G_incomplete_ext");
  require_finite(x, "G_incomplete_ext");
  if (x <= 0.0) throw DomainError("G_incomplete_ext: x must be > 0");
  if (s >= 0.0) return G_incomplete_log(s, x);
  if (x >= 1.0) return LogValue::from_log(-x + std::log(upper_gamma_cf(s, x)));
  if (s > -1.0) {
    const double g = upper_gamma_small_s(s, x);
    return LogValue::from_log(std::log(g) - s * std::log(x));
  }
  // Downward recurrence G(s-1, x) = (x G(s, x) - e^{-x}) / (s - 1) from
  // s0 in (-1, 0]; every term is positive for x < 1.
  const double m = std::ceil(-s) - 1.0;  // s = s0 - m with s0 in (-1, 0]
  double s0 = s + m;
  if (s0 <= -1.0) {
    s0 += 1.0;
  }
  double g = s0 == 0.0 ? expint_e1(x).to_double()
                       : std::exp(std::log(upper_gamma_small_s(s0, x)) - s0 * std::log(x));
  const double ex = std::exp(-x);
  for (double t = s0; t > s + 0.5; t -= 1.0) g = (x * g - ex) / (t - 1.0);
  return LogValue::from_double(g);
}

LogValue K_cn(double c, int n) {
  require_finite(c, "K_cn");
  if (c <= 0.0) throw DomainError("K_cn: c must be > 0");
  if (n < 1) throw DomainError("K_cn: n must be >= 1");
  const double cn = c * n;
  const BallGeometry ball = ball_geometry(n);
  return LogValue::from_log(log_gamma(cn) - cn * kLogPi + 2.0 * c * ball.log_volume);
}

}  // namespace epstein_lab
