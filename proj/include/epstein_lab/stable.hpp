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


// Stable laws S_alpha(sigma, beta, mu) in the Samorodnitsky-Taqqu
// parameterization, with characteristic function
//   alpha != 1: exp(-sigma^a |t|^a (1 - i beta sign(t) tan(pi a / 2)) + i mu t)
//   alpha == 1: exp(-sigma |t| (1 + i beta (2/pi) sign(t) log|t|) + i mu t)

#ifndef EPSTEIN_LAB_STABLE_HPP
#define EPSTEIN_LAB_STABLE_HPP

#include <complex>
#include <vector>

#include "epstein_lab/parallel.hpp"

namespace epstein_lab::stable {

struct StableParams {
  double alpha = 2;
  double sigma = 1;
  double beta = 0;
  double mu = 0;

  // Validates ranges; beta is set to 0 when alpha = 2.
  static StableParams make(double alpha, double sigma, double beta, double mu);
};

// Law of H(c), c in (1/4, 1/2).
StableParams params_for_H(double c);
// Law of H(c) + 1/(1 - 2c).
StableParams params_for_H_hat(double c);
// Law of (2c - 1/2)^{1/2} H(c).
StableParams params_for_scaled_H(double c);
// Law of Z_0: S_1(pi/2, 1, 1 - log 2 - gamma).
StableParams params_for_Z0();

std::complex<double> char_fn(const StableParams& p, double t);

// Distribution function and density by Fourier inversion; far tails use the
// Zolotarev integral representation. Throws InversionError when the
// quadrature error estimate exceeds 1e-7.
double cdf(const StableParams& p, double x);
double pdf(const StableParams& p, double x);

// Both inversion routes, exposed for cross-checks.
double cdf_fourier(const StableParams& p, double x);
double cdf_zolotarev(const StableParams& p, double x);
double pdf_fourier(const StableParams& p, double x);
double pdf_zolotarev(const StableParams& p, double x);

double sample(const StableParams& p, Rng& rng);

// Law of a X + b for X ~ p.
StableParams affine(const StableParams& p, double a, double b);

// Tabulated distribution function on [lo, hi] with cubic Hermite
// interpolation in an asinh-stretched coordinate; exact evaluation outside.
class CdfTable {
 public:
  CdfTable(const StableParams& p, double lo, double hi, int nodes = 2049);
  double operator()(double x) const;
  // Largest interpolation error observed at the cell midpoints of a sample of
  // cells, measured against the exact cdf.
  double estimated_error() const { return error_; }

 private:
  double to_u(double x) const;
  StableParams p_;
  double center_, scale_, u_lo_, u_hi_, du_;
  std::vector<double> F_, dF_;
  double error_ = 0;
};

}  // namespace epstein_lab::stable

#endif  // EPSTEIN_LAB_STABLE_HPP
