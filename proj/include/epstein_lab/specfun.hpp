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

// Real special functions. Anything that can overflow in double precision
// for large arguments is also available as a LogValue.

#ifndef EPSTEIN_LAB_SPECFUN_HPP
#define EPSTEIN_LAB_SPECFUN_HPP

#include <limits>

namespace epstein_lab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLog2 = 0.69314718055994530941723212145817657;
inline constexpr double kLogPi = 1.14472988584940017414342735135305871;

// A real number stored as sign * exp(log_abs).
struct LogValue {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static LogValue from_double(double v);
  static LogValue from_log(double log_abs, int sign = 1);

  double to_double() const;
  bool is_zero() const { return sign == 0; }

  LogValue operator-() const { return {-sign, log_abs}; }
  LogValue inverse() const;
  LogValue pow(double e) const;  // requires sign >= 0 unless e is an integer

  friend LogValue operator*(const LogValue& a, const LogValue& b);
  friend LogValue operator/(const LogValue& a, const LogValue& b);
  friend LogValue operator+(const LogValue& a, const LogValue& b);
  friend LogValue operator-(const LogValue& a, const LogValue& b) {
    return a + (-b);
  }
};

double log_gamma(double x);
double digamma(double x);

// Riemann zeta at integer n >= 2.
double zeta_int(int n);
// Hurwitz zeta sum_{k>=0} (q+k)^{-s} for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

struct BallGeometry {
  double volume;        // V_n, volume of the unit ball
  double surface;       // omega_n, area of the unit sphere
  double log_volume;
  double log_surface;
};
BallGeometry ball_geometry(int n);

// Upper incomplete gamma Gamma(s, x), s >= 0, x > 0.
LogValue upper_gamma(double s, double x);
// Regularized Q(a, x) = Gamma(a, x) / Gamma(a) and P = 1 - Q, a > 0, x >= 0.
LogValue regularized_q(double a, double x);
double regularized_p(double a, double x);
// Exponential integral E_1(x), x > 0.
LogValue expint_e1(double x);

// G(s, x) = int_1^inf t^{s-1} e^{-x t} dt = x^{-s} Gamma(s, x).
LogValue G_incomplete_log(double s, double x);
double G_incomplete(double s, double x);
// Same integral for any real s (the integral converges for every s when
// x > 0). Needed on the dual side of the functional equation for s > n/2.
LogValue G_incomplete_ext(double s, double x);

// K_{c,n} = Gamma(c n) pi^{-c n} (n / omega_n)^{-2c}.
LogValue K_cn(double c, int n);

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_SPECFUN_HPP
