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


#include "epstein_lab/epstein.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "epstein_lab/error.hpp"
#include "epstein_lab/specfun.hpp"

namespace epstein_lab {
namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kBaseOvercount = 4.0;
constexpr int kBisectSteps = 40;

double inf() { return std::numeric_limits<double>::infinity(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

double compensation_tail(int n, double s, double X) {
  require(n >= 1 && X > 0 && std::isfinite(s), "compensation_tail: invalid arguments");
  const double a = 0.5 * n;
  auto f = [&](double u) {
    if (!std::isfinite(u)) return 0.0;
    const double lq = regularized_q(a, X + u).log_abs;
    return std::exp((s - 1.0 - a) * std::log1p(u / X) + lq);
  };
  double err = 0;
  const double v = gauss_kronrod<double, 61>::integrate(f, 0.0, inf(), 15, 1e-13, &err);
  return v / X;
}

double tail_sigma(int n, double s, double X) {
  require(n >= 1 && X > 0 && std::isfinite(s), "tail_sigma: invalid arguments");
  const double a = 0.5 * n;
  const double lga = log_gamma(a);
  auto f = [&](double u) {
    if (!std::isfinite(u)) return 0.0;
    const double x = X + u;
    return std::exp(2.0 * G_incomplete_ext(s, x).log_abs + (a - 1.0) * std::log(x) - lga);
  };
  double err = 0;
  const double v = gauss_kronrod<double, 61>::integrate(f, 0.0, inf(), 15, 1e-10, &err);
  return std::sqrt(5.0 * v);
}

struct EpsteinEvaluator::SideData {
  explicit SideData(Lattice l) : lattice(std::move(l)) {
    if (const auto& form = lattice.integral_form()) shell = std::exp(2.0 * form->log_scale);
  }
  Lattice lattice;
  // Squared lengths of an integral form are multiples of this.
  double shell = 0;
  std::unique_ptr<ShortVectorEnumerator> enumerator;
  std::vector<double> sq;
  double radius2 = 0;
};

EpsteinEvaluator::EpsteinEvaluator(const Lattice& lattice, EpsteinOptions options)
    : n_(lattice.dim()), options_(options),
      primal_(std::make_unique<SideData>(lattice)),
      dual_(std::make_unique<SideData>(dual(lattice))) {}

EpsteinEvaluator::~EpsteinEvaluator() = default;
EpsteinEvaluator::EpsteinEvaluator(EpsteinEvaluator&&) noexcept = default;
EpsteinEvaluator& EpsteinEvaluator::operator=(EpsteinEvaluator&&) noexcept = default;

const std::vector<double>& EpsteinEvaluator::lengths(Side side, double radius2) {
  SideData& d = side == Side::kPrimal ? *primal_ : *dual_;
  if (radius2 <= d.radius2) return d.sq;
  if (!d.enumerator) d.enumerator = std::make_unique<ShortVectorEnumerator>(d.lattice, options_.limits);
  // Overshoot the volume so that the adaptive steps reuse one enumeration.
  const double target = radius2 * std::pow(1.5, 2.0 / n_);
  d.sq = d.enumerator->squared_lengths(std::sqrt(target));
  d.radius2 = target;
  return d.sq;
}

double EpsteinEvaluator::partial_sum(Side side, double s, double radius2) {
  const auto& sq = lengths(side, radius2);
  const auto end = std::upper_bound(sq.begin(), sq.end(), radius2);
  double sum = 0;
  // Smallest terms first.
  for (auto it = end; it != sq.begin();) {
    --it;
    sum += G_incomplete_ext(s, kPi * *it).to_double();
  }
  return 2.0 * sum;
}

double EpsteinEvaluator::point_count(Side side, double radius2) {
  const auto& sq = lengths(side, radius2);
  return 2.0 * static_cast<double>(std::upper_bound(sq.begin(), sq.end(), radius2) - sq.begin());
}

LatticeSum EpsteinEvaluator::G_sum(Side side, double s, double tol) {
  require(std::isfinite(s), "G_sum: s must be finite");
  require(tol > 0, "G_sum: tol must be > 0");
  const double a = 0.5 * n_;
  const BallGeometry ball = ball_geometry(n_);
  auto volume_of = [&](double X) { return std::exp(ball.log_volume + a * std::log(X / kPi)); };
  auto X_of = [&](double V) { return kPi * std::exp((std::log(V) - ball.log_volume) / a); };
  auto certified_bound = [&](double X, double kappa) {
    return kappa * (volume_of(X) * G_incomplete_ext(s, X).to_double() + compensation_tail(n_, s, X));
  };
  // Smallest X in [lo, hi] with bound(X) <= tol, assuming bound decreases.
  auto solve = [&](auto&& bound, double lo, double hi) {
    if (bound(lo) <= tol) return lo;
    for (int i = 0; i < kBisectSteps; ++i) {
      const double mid = std::sqrt(lo * hi);
      (bound(mid) <= tol ? hi : lo) = mid;
    }
    return hi;
  };
  // Cut midway between two shells of an integral lattice so that the
  // compensating integral splits the boundary shell evenly.
  const double shell = (side == Side::kPrimal ? *primal_ : *dual_).shell;
  auto snap = [&](double X) {
    if (shell <= 0) return X;
    return kPi * shell * (std::ceil(X / (kPi * shell) - 0.5) + 0.5);
  };
  const double X_min = std::max(s, 0.0) + 2.0;
  const double X_cap = std::max(X_min, X_of(options_.max_volume));

  if (options_.policy != TailPolicy::kStatistical) {
    const double X_cert_cap = std::max(X_min, X_of(std::min(options_.max_certified_volume, options_.max_volume)));
    const double at_cap = certified_bound(X_cert_cap, kBaseOvercount);
    if (at_cap <= tol) {
      double kappa = kBaseOvercount;
      double X = solve([&](double x) { return certified_bound(x, kappa); }, X_min, X_cert_cap);
      for (int iter = 0; iter < 8; ++iter) {
        const double count = point_count(side, X / kPi);
        kappa = std::max(kBaseOvercount, count / volume_of(X));
        if (certified_bound(X, kappa) <= tol) break;
        X = solve([&](double x) { return certified_bound(x, kappa); }, X, X_cap);
      }
      X = snap(X);
      double value = partial_sum(side, s, X / kPi) + compensation_tail(n_, s, X);
      if (options_.adaptive_check) {
        for (int iter = 0; iter < 10; ++iter) {
          const double X2 = snap(X * std::pow(1.25, 2.0 / n_));
          if (volume_of(X2) > options_.max_volume) break;
          const double v2 = partial_sum(side, s, X2 / kPi) + compensation_tail(n_, s, X2);
          const bool agree = std::fabs(v2 - value) < 0.25 * tol;
          X = X2;
          value = v2;
          if (agree) break;
        }
        kappa = std::max(kBaseOvercount, point_count(side, X / kPi) / volume_of(X));
      }
      const double bound = certified_bound(X, kappa);
      if (bound > tol && options_.policy == TailPolicy::kCertified)
        throw CutoffError("G_sum: certified tail bound above tolerance", bound);
      if (bound <= tol) return {value, bound, volume_of(X), true};
    } else if (options_.policy == TailPolicy::kCertified) {
      throw CutoffError("G_sum: cutoff cap reached before the certified tolerance", at_cap);
    }
  }

  auto stat_bound = [&](double X) { return 3.0 * tail_sigma(n_, s, X); };
  const double at_cap = stat_bound(X_cap);
  if (at_cap > tol) throw CutoffError("G_sum: cutoff cap reached before the statistical tolerance", at_cap);
  const double X = snap(solve(stat_bound, X_min, X_cap));
  const double value = partial_sum(side, s, X / kPi) + compensation_tail(n_, s, X);
  return {value, stat_bound(X), volume_of(X), false};
}

LatticeSum EpsteinEvaluator::H(Side side, double s, double tol) {
  const double a = 0.5 * n_;
  require(s != a, "H: s = n/2 is a pole");
  LatticeSum g = G_sum(side, s, tol);
  g.value -= 1.0 / (a - s);
  return g;
}

ZetaEvaluation EpsteinEvaluator::F(double s, double tol) {
  const double a = 0.5 * n_;
  require(std::isfinite(s), "F: s must be finite");
  require(s != 0.0 && s != a, "F: s = 0 and s = n/2 are poles");
  const LatticeSum hp = H(Side::kPrimal, s, 0.5 * tol);
  const LatticeSum hd = H(Side::kDual, a - s, 0.5 * tol);
  return {s, hp.value + hd.value, std::max(hp.cutoff_volume, hd.cutoff_volume),
          hp.tail_bound + hd.tail_bound, hp.certified && hd.certified};
}

ZetaEvaluation EpsteinEvaluator::E(double s, double tol) {
  const double a = 0.5 * n_;
  require(std::isfinite(s) && s > -1.0, "E_n: s must be > -1");
  require(s != a, "E_n: s = n/2 is a pole");
  if (s == 0.0) return {0.0, -1.0, 0.0, 0.0, true};
  // E = pi^s / Gamma(s + 1) * (s F), with the -1/s pole of F cancelled by s.
  const double pref = std::exp(s * kLogPi - log_gamma(s + 1.0));
  const double tol_sum = 0.5 * tol / (pref * std::fabs(s));
  const LatticeSum gp = G_sum(Side::kPrimal, s, tol_sum);
  const LatticeSum gd = G_sum(Side::kDual, a - s, tol_sum);
  const double sF = s * (gp.value - 1.0 / (a - s) + gd.value) - 1.0;
  return {s, pref * sF, std::max(gp.cutoff_volume, gd.cutoff_volume),
          pref * std::fabs(s) * (gp.tail_bound + gd.tail_bound), gp.certified && gd.certified};
}

double EpsteinEvaluator::E_normalized(double c, double tol) {
  require(c > 0.0 && c < 0.5, "E_normalized: c must lie in (0, 1/2)");
  const double logK = K_cn(c, n_).log_abs;
  const ZetaEvaluation f = F(c * n_, tol * std::exp(logK));
  return f.value * std::exp(-logK);
}

double EpsteinEvaluator::E_hat(double c, double tol) {
  require(c > 0.0 && c <= 0.5, "E_hat: c must lie in (0, 1/2]");
  if (c < 0.5) return E_normalized(c, tol) + 1.0 / (1.0 - 2.0 * c);
  const double half = 0.5 * n_;
  const double h = height(tol / half);
  return std::log(static_cast<double>(n_)) - ball_geometry(n_).log_surface +
         half * (h + kEulerGamma - 2.0 * kLog2 - digamma(half));
}

double EpsteinEvaluator::height(double tol) {
  require(n_ >= 2, "height: n must be >= 2");
  const LatticeSum j = G_sum(Side::kDual, 0.0, 0.5 * tol);
  const LatticeSum h = G_sum(Side::kPrimal, 0.5 * n_, 0.5 * tol);
  return std::log(4.0 * kPi) - kEulerGamma - 2.0 / n_ + j.value + h.value;
}

double EpsteinEvaluator::height_statistic(double tol) {
  return n_ * (height(tol / n_) - height_limit_constant()) + std::log(static_cast<double>(n_));
}

VectorLengthList EpsteinEvaluator::volumes(Side side, double vmax) {
  require(vmax > 0, "volumes: vmax must be > 0");
  const BallGeometry ball = ball_geometry(n_);
  const double r2 = std::exp(2.0 * (std::log(vmax) - ball.log_volume) / n_);
  const auto& sq = lengths(side, r2);
  VectorLengthList vl;
  vl.dim = n_;
  vl.vmax = vmax;
  for (double x : sq) {
    const double v = std::exp(ball.log_volume + 0.5 * n_ * std::log(x));
    if (v > vmax) break;
    vl.volumes.push_back(v);
    vl.sq_lengths.push_back(x);
  }
  return vl;
}

double height_limit_constant() { return std::log(4.0 * kPi) - kEulerGamma + 1.0; }

LatticeSum H_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options) {
  require(s >= 0.0 && s < 0.5 * lattice.dim(), "H_n_eval: s must lie in [0, n/2)");
  return EpsteinEvaluator(lattice, options).H(Side::kPrimal, s, tol);
}

ZetaEvaluation F_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).F(s, tol);
}

ZetaEvaluation E_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).E(s, tol);
}

double E_n_normalized(const Lattice& lattice, double c, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).E_normalized(c, tol);
}

double E_hat(const Lattice& lattice, double c, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).E_hat(c, tol);
}

double height(const Lattice& lattice, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).height(tol);
}

double height_statistic(const Lattice& lattice, double tol, const EpsteinOptions& options) {
  return EpsteinEvaluator(lattice, options).height_statistic(tol);
}

DirectSum direct_epstein_sum(const Lattice& lattice, double s, double cutoff_radius, double tol) {
  const int n = lattice.dim();
  require(s > 0.5 * n, "direct_epstein_sum: s must exceed n/2");
  require(cutoff_radius > 0, "direct_epstein_sum: cutoff radius must be > 0");
  const BallGeometry ball = ball_geometry(n);
  ShortVectorEnumerator en(lattice, EnumerationLimits{2e8, 2e8});
  const auto sq = en.squared_lengths(cutoff_radius);
  double sum = 0;
  for (auto it = sq.rbegin(); it != sq.rend(); ++it) sum += std::pow(*it, -s);
  sum *= 2.0;
  const double R = cutoff_radius;
  const double vol = std::exp(ball.log_volume + n * std::log(R));
  const double kappa = std::max(kBaseOvercount, 2.0 * sq.size() / vol);
  const double rpow = std::pow(R, n - 2.0 * s);
  const double mean = n * ball.volume * rpow / (2.0 * s - n);
  const double bound = kappa * ball.volume * rpow * 2.0 * s / (2.0 * s - n);
  if (bound > tol) throw CutoffError("direct_epstein_sum: tail bound above tolerance", bound);
  return {sum + mean, bound};
}

}  // namespace epstein_lab
