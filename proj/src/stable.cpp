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


#include "epstein_lab/stable.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "epstein_lab/error.hpp"
#include "epstein_lab/specfun.hpp"

namespace epstein_lab::stable {
namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

constexpr double kInversionTol = 1e-7;
constexpr double kParetoSwitch = 1e9;
// |z| beyond which the Zolotarev representation replaces Fourier inversion.
constexpr double kTailSwitch = 8.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_c(double c, const char* what) {
  require(c > 0.25 && c < 0.5, std::string(what) + ": c must lie in (1/4, 1/2)");
}

// Standardized argument: X = sigma Z + mu (+ (2/pi) beta sigma log sigma if alpha = 1).
double standardize(const StableParams& p, double x) {
  if (p.alpha == 1.0) return (x - p.mu - (2.0 / kPi) * p.beta * p.sigma * std::log(p.sigma)) / p.sigma;
  return (x - p.mu) / p.sigma;
}

double normal_cdf(const StableParams& p, double x) {
  return 0.5 * std::erfc(-(x - p.mu) / (2.0 * p.sigma));
}

double normal_pdf(const StableParams& p, double x) {
  const double d = (x - p.mu) / (2.0 * p.sigma);
  return std::exp(-d * d) / (2.0 * p.sigma * std::sqrt(kPi));
}

// Adaptive Gauss-Kronrod with an absolute error target; accumulates the
// estimated error into err.
template <class F>
double gk_abs(F& f, double a, double b, double tol, int depth, double& err) {
  double e = 0, l1 = 0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &e, &l1);
  if (e <= tol || e <= 1e-14 * l1 || depth == 0) {
    err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return gk_abs(f, a, m, 0.5 * tol, depth - 1, err) + gk_abs(f, m, b, 0.5 * tol, depth - 1, err);
}

// Phase of exp(-i u z) phi_std(u) for u > 0.
double phase(double alpha, double beta, double z, double u) {
  if (alpha == 1.0) return -z * u - beta * (2.0 / kPi) * u * std::log(u);
  return beta * std::tan(kPi * alpha / 2.0) * std::pow(u, alpha) - z * u;
}

// int_0^inf exp(-u^alpha) w(phase(u), u) du over oscillation-sized panels.
template <class W>
double fourier_integral(double alpha, double beta, double z, W&& w) {
  const double U = std::pow(37.0, 1.0 / alpha);
  double omega = std::fabs(z) + 1.0;
  if (alpha == 1.0) {
    omega += (2.0 / kPi) * std::fabs(beta) * (std::fabs(std::log(U)) + 1.0);
  } else {
    omega += alpha * std::fabs(beta * std::tan(kPi * alpha / 2.0)) * std::pow(U, std::max(alpha - 1.0, 0.0));
  }
  const int panels = static_cast<int>(std::clamp(std::ceil(U * omega / kPi) + 4.0, 8.0, 2e5));
  const double width = U / panels;
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    return std::exp(-std::pow(u, alpha)) * w(phase(alpha, beta, z, u), u);
  };
  double total_err = 0;
  double err = 0;
  static thread_local tanh_sinh<double> ts;
  double sum = ts.integrate(f, 0.0, width, 1e-12, &err);
  total_err += std::fabs(err) * std::max(1.0, std::fabs(sum));
  const double panel_tol = 1e-11 / panels;
  for (int k = 1; k < panels; ++k) sum += gk_abs(f, k * width, (k + 1) * width, panel_tol, 12, total_err);
  if (total_err > kInversionTol) throw InversionError("stable: Fourier inversion did not converge", total_err);
  return sum;
}

double fourier_cdf_std(double alpha, double beta, double z) {
  const double I = fourier_integral(alpha, beta, z, [](double ph, double u) { return std::sin(ph) / u; });
  return std::clamp(0.5 - I / kPi, 0.0, 1.0);
}

double fourier_pdf_std(double alpha, double beta, double z) {
  const double I = fourier_integral(alpha, beta, z, [](double ph, double) { return std::cos(ph); });
  return std::max(0.0, I / kPi);
}

// Integrates exp(-e^{h}) (kind 0) or e^{h} exp(-e^{h}) (kind 1) over [a, b]
// for a monotone h, split where h crosses 0.
template <class Hfn>
double zolotarev_integral(Hfn&& h, double a, double b, int kind) {
  auto g = [&](double t) {
    const double v = h(t);
    if (std::isnan(v)) return 0.0;
    if (v == std::numeric_limits<double>::infinity()) return 0.0;
    const double ev = std::exp(v);
    return kind == 0 ? std::exp(-ev) : std::exp(v - ev);
  };
  const double span = b - a;
  const double ha = h(a + 1e-12 * span), hb = h(b - 1e-12 * span);
  std::vector<double> cuts{a};
  if (std::isfinite(ha) && std::isfinite(hb) && (ha < 0) != (hb < 0)) {
    double lo = a, hi = b;
    const bool rising = ha < hb;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double v = h(mid);
      ((v < 0) == rising ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    // A few extra breakpoints around the peak help with narrow integrands.
    for (double frac : {0.5, 0.9, 0.99}) cuts.push_back(a + frac * (root - a));
    cuts.push_back(root);
    for (double frac : {0.01, 0.1, 0.5}) cuts.push_back(root + frac * (b - root));
    for (double mult : {1.0, 10.0}) cuts.push_back(root + mult * (root - a));
    // The transition has width about 1/|h'(root)|, which can be far below the
    // distance to either end in the extreme tails.
    const double eps = 1e-3 * std::min(root - a, b - root);
    const double slope = std::fabs(h(root + eps) - h(root - eps)) / (2.0 * eps);
    if (std::isfinite(slope) && slope > 0) {
      for (double m : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        const double w = m / slope;
        if (root - w > a) cuts.push_back(root - w);
        if (root + w < b) cuts.push_back(root + w);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double t) { return t >= b; }), cuts.end());
  } else if (std::isinf(ha) != std::isinf(hb) || (ha < 0) != (hb < 0)) {
    cuts.push_back(0.5 * (a + b));
  }
  cuts.push_back(b);
  double sum = 0, total_err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    static thread_local tanh_sinh<double> ts;
    double e = 0;
    sum += ts.integrate(g, cuts[i], cuts[i + 1], 1e-12, &e);
    total_err += e;
  }
  if (total_err > kInversionTol * std::max(1.0, std::fabs(sum)))
    throw InversionError("stable: Zolotarev integral did not converge", total_err);
  return sum;
}

struct ZolotarevSetup {
  double theta0;
  double log_cos_a_theta0;
  // D = pi - alpha (theta0 + pi/2); both sin(alpha (theta0 + theta)) and
  // cos(alpha theta0 + (alpha - 1) theta) are sines of D plus a multiple of phi.
  double D;
};

ZolotarevSetup setup(double alpha, double beta) {
  const double theta0 = std::atan(beta * std::tan(kPi * alpha / 2.0)) / alpha;
  const double D = (beta == -1.0 && alpha > 1.0) ? 0.0 : kPi - alpha * (theta0 + kPi / 2.0);
  return {theta0, std::log(std::cos(alpha * theta0)), D};
}

// log V in the variable phi = pi/2 - theta, so that the factors vanishing at
// the endpoints stay accurate. alpha != 1.
double log_V(double alpha, const ZolotarevSetup& st, double phi) {
  const double ct = std::sin(phi);
  const double sa = std::sin(st.D + alpha * phi);
  const double c2 = std::sin(st.D + (alpha - 1.0) * phi);
  if (ct <= 0.0) return alpha > 1.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  if (sa <= 0.0) return alpha > 1.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  const double e = alpha / (alpha - 1.0);
  return st.log_cos_a_theta0 / (alpha - 1.0) + e * (std::log(ct) - std::log(sa)) + std::log(c2) - std::log(ct);
}

// log V(theta; 1, beta) for beta > 0, in phi = pi/2 - theta on (0, pi).
double log_V1(double beta, double phi) {
  const double ct = std::sin(phi);
  const double a = kPi / 2.0 + beta * (kPi / 2.0 - phi);
  if (ct <= 0.0) return phi < 1.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  if (a <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(2.0 / kPi) + std::log(a) - std::log(ct) + a * std::cos(phi) / (ct * beta);
}

double zolotarev_cdf_std(double alpha, double beta, double z) {
  if (alpha == 1.0) {
    if (beta == 0.0) return 0.5 + std::atan(z) / kPi;
    if (beta < 0.0) return 1.0 - zolotarev_cdf_std(alpha, -beta, -z);
    // Past this point the leading Pareto term is exact to O(log z / z).
    if (z > kParetoSwitch) return 1.0 - (1.0 + beta) / (kPi * z);
    const double shift = -kPi * z / (2.0 * beta);
    return zolotarev_integral([&](double t) { return shift + log_V1(beta, t); }, 0.0, kPi, 0) / kPi;
  }
  const ZolotarevSetup st = setup(alpha, beta);
  if (z == 0.0) return (kPi / 2.0 - st.theta0) / kPi;
  if (z < 0.0) return 1.0 - zolotarev_cdf_std(alpha, -beta, -z);
  const double lx = alpha / (alpha - 1.0) * std::log(z);
  const double I =
      zolotarev_integral([&](double t) { return lx + log_V(alpha, st, t); }, 0.0, kPi / 2.0 + st.theta0, 0) / kPi;
  if (alpha > 1.0) return 1.0 - I;
  return (kPi / 2.0 - st.theta0) / kPi + I;
}

double zolotarev_pdf_std(double alpha, double beta, double z) {
  if (alpha == 1.0) {
    if (beta == 0.0) return 1.0 / (kPi * (1.0 + z * z));
    if (beta < 0.0) return zolotarev_pdf_std(alpha, -beta, -z);
    if (z > kParetoSwitch) return (1.0 + beta) / (kPi * z * z);
    const double shift = -kPi * z / (2.0 * beta);
    // f = 1/(2 beta) int e^{h} exp(-e^{h}) with e^{h} = e^{shift} V1.
    return zolotarev_integral([&](double t) { return shift + log_V1(beta, t); }, 0.0, kPi, 1) /
           (2.0 * beta);
  }
  const ZolotarevSetup st = setup(alpha, beta);
  if (z == 0.0) {
    const double zeta = -beta * std::tan(kPi * alpha / 2.0);
    return std::exp(log_gamma(1.0 + 1.0 / alpha)) * std::cos(st.theta0) *
           std::pow(1.0 + zeta * zeta, -1.0 / (2.0 * alpha)) / kPi;
  }
  if (z < 0.0) return zolotarev_pdf_std(alpha, -beta, -z);
  const double lx = alpha / (alpha - 1.0) * std::log(z);
  // f = alpha z^{1/(alpha-1)} / (pi |alpha-1|) int V exp(-X V), and X V = e^{h}.
  const double I = zolotarev_integral([&](double t) { return lx + log_V(alpha, st, t); }, 0.0, kPi / 2.0 + st.theta0, 1);
  return alpha / (kPi * std::fabs(alpha - 1.0) * z) * I;
}

}  // namespace

StableParams StableParams::make(double alpha, double sigma, double beta, double mu) {
  require(alpha > 0 && alpha <= 2, "StableParams: alpha must lie in (0, 2]");
  require(sigma > 0 && std::isfinite(sigma), "StableParams: sigma must be > 0");
  require(beta >= -1 && beta <= 1, "StableParams: beta must lie in [-1, 1]");
  require(std::isfinite(mu), "StableParams: mu must be finite");
  return {alpha, sigma, alpha == 2.0 ? 0.0 : beta, mu};
}

StableParams params_for_H(double c) {
  check_c(c, "params_for_H");
  const double alpha = 1.0 / (2.0 * c);
  // Gamma(2 - alpha) cos(pi alpha / 2) / (2 (1 - alpha)): both signs flipped.
  const double base = std::exp(log_gamma(2.0 - alpha)) * -std::cos(kPi * alpha / 2.0) / (2.0 * (alpha - 1.0));
  return StableParams::make(alpha, 2.0 * std::pow(base, 2.0 * c), 1.0, 0.0);
}

StableParams params_for_H_hat(double c) {
  StableParams p = params_for_H(c);
  p.mu = 1.0 / (1.0 - 2.0 * c);
  return p;
}

StableParams params_for_scaled_H(double c) {
  StableParams p = params_for_H(c);
  p.sigma *= std::sqrt(2.0 * c - 0.5);
  return p;
}

StableParams params_for_Z0() { return StableParams::make(1.0, kPi / 2.0, 1.0, 1.0 - kLog2 - kEulerGamma); }

std::complex<double> char_fn(const StableParams& p, double t) {
  if (t == 0.0) return {1.0, 0.0};
  const double at = std::fabs(t);
  const double sg = t > 0 ? 1.0 : -1.0;
  double re = 0, im = p.mu * t;
  if (p.alpha == 1.0) {
    re = -p.sigma * at;
    im -= p.sigma * at * p.beta * (2.0 / kPi) * sg * std::log(at);
  } else {
    const double sa = std::pow(p.sigma * at, p.alpha);
    re = -sa;
    im += sa * p.beta * sg * std::tan(kPi * p.alpha / 2.0);
  }
  return std::exp(std::complex<double>(re, im));
}

double cdf_fourier(const StableParams& p, double x) {
  if (p.alpha == 2.0) return normal_cdf(p, x);
  return fourier_cdf_std(p.alpha, p.beta, standardize(p, x));
}

double pdf_fourier(const StableParams& p, double x) {
  if (p.alpha == 2.0) return normal_pdf(p, x);
  return fourier_pdf_std(p.alpha, p.beta, standardize(p, x)) / p.sigma;
}

double cdf_zolotarev(const StableParams& p, double x) {
  if (p.alpha == 2.0) return normal_cdf(p, x);
  return std::clamp(zolotarev_cdf_std(p.alpha, p.beta, standardize(p, x)), 0.0, 1.0);
}

double pdf_zolotarev(const StableParams& p, double x) {
  if (p.alpha == 2.0) return normal_pdf(p, x);
  return std::max(0.0, zolotarev_pdf_std(p.alpha, p.beta, standardize(p, x))) / p.sigma;
}

double cdf(const StableParams& p, double x) {
  if (std::isnan(x)) throw DomainError("stable::cdf: NaN argument");
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (p.alpha == 2.0) return normal_cdf(p, x);
  const double z = standardize(p, x);
  if (std::fabs(z) > kTailSwitch) return std::clamp(zolotarev_cdf_std(p.alpha, p.beta, z), 0.0, 1.0);
  return fourier_cdf_std(p.alpha, p.beta, z);
}

double pdf(const StableParams& p, double x) {
  if (std::isnan(x)) throw DomainError("stable::pdf: NaN argument");
  if (std::isinf(x)) return 0.0;
  if (p.alpha == 2.0) return normal_pdf(p, x);
  const double z = standardize(p, x);
  if (std::fabs(z) > kTailSwitch) return std::max(0.0, zolotarev_pdf_std(p.alpha, p.beta, z)) / p.sigma;
  return fourier_pdf_std(p.alpha, p.beta, z) / p.sigma;
}

double sample(const StableParams& p, Rng& rng) {
  std::uniform_real_distribution<double> unif(-kPi / 2.0, kPi / 2.0);
  std::exponential_distribution<double> expo(1.0);
  double V = unif(rng);
  while (V == -kPi / 2.0) V = unif(rng);
  const double W = expo(rng);
  const double a = p.alpha, b = p.beta;
  if (a == 1.0) {
    const double h = kPi / 2.0 + b * V;
    const double X = (2.0 / kPi) * (h * std::tan(V) - b * std::log((kPi / 2.0) * W * std::cos(V) / h));
    return p.sigma * X + (2.0 / kPi) * b * p.sigma * std::log(p.sigma) + p.mu;
  }
  const double t = b * std::tan(kPi * a / 2.0);
  const double B = std::atan(t) / a;
  const double S = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
  const double X = S * std::sin(a * (V + B)) / std::pow(std::cos(V), 1.0 / a) *
                   std::pow(std::cos(V - a * (V + B)) / W, (1.0 - a) / a);
  return p.sigma * X + p.mu;
}

StableParams affine(const StableParams& p, double a, double b) {
  require(a != 0.0 && std::isfinite(a) && std::isfinite(b), "affine: a must be non-zero");
  const double sg = a > 0 ? 1.0 : -1.0;
  double mu = a * p.mu + b;
  if (p.alpha == 1.0) mu -= (2.0 / kPi) * a * std::log(std::fabs(a)) * p.sigma * p.beta;
  return StableParams::make(p.alpha, std::fabs(a) * p.sigma, sg * p.beta, mu);
}

CdfTable::CdfTable(const StableParams& p, double lo, double hi, int nodes) : p_(p) {
  require(lo < hi, "CdfTable: need lo < hi");
  require(nodes >= 8, "CdfTable: need at least 8 nodes");
  center_ = p.alpha == 1.0 ? p.mu + (2.0 / kPi) * p.beta * p.sigma * std::log(p.sigma) : p.mu;
  scale_ = p.sigma;
  u_lo_ = to_u(lo);
  u_hi_ = to_u(hi);
  du_ = (u_hi_ - u_lo_) / (nodes - 1);
  F_.resize(nodes);
  dF_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double u = u_lo_ + i * du_;
    const double x = center_ + scale_ * std::sinh(u);
    F_[i] = cdf(p, x);
    dF_[i] = pdf(p, x) * scale_ * std::cosh(u);
  }
  const int stride = std::max(1, (nodes - 1) / 64);
  for (int i = 0; i + 1 < nodes; i += stride) {
    const double x = center_ + scale_ * std::sinh(u_lo_ + (i + 0.5) * du_);
    error_ = std::max(error_, std::fabs((*this)(x) - cdf(p, x)));
  }
}

double CdfTable::to_u(double x) const { return std::asinh((x - center_) / scale_); }

double CdfTable::operator()(double x) const {
  const double u = to_u(x);
  if (!(u >= u_lo_ && u <= u_hi_)) return cdf(p_, x);
  const int last = static_cast<int>(F_.size()) - 1;
  int i = std::min(static_cast<int>((u - u_lo_) / du_), last - 1);
  const double t = (u - (u_lo_ + i * du_)) / du_;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double v = h00 * F_[i] + h10 * du_ * dF_[i] + h01 * F_[i + 1] + h11 * du_ * dF_[i + 1];
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace epstein_lab::stable
