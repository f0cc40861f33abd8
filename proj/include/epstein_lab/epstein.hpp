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


// Epstein zeta function E_n(L, s) = sum' |m|^{-2s} on the real axis, via
// the incomplete gamma expansion
//   F_n(L, s) = pi^{-s} Gamma(s) E_n(L, s) = H_n(L, s) + H_n(L*, n/2 - s),
//   H_n(L, s) = -1 / (n/2 - s) + sum'_{m in L} G(s, pi |m|^2).
//
// Lattice sums are cut at a radius r and compensated by the mean of the
// discarded part, T(s, X) = int_{|x| > r} G(s, pi |x|^2) dx with X = pi r^2.
// The error of a compensated sum is either bounded from a point-count
// overestimate (certified) or by three standard deviations of the tail
// fluctuation (statistical), whichever the options allow.

#ifndef EPSTEIN_LAB_EPSTEIN_HPP
#define EPSTEIN_LAB_EPSTEIN_HPP

#include <memory>
#include <vector>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/lattice.hpp"

namespace epstein_lab {

enum class TailPolicy {
  kCertified,    // fail with CutoffError when the certified bound cannot reach tol
  kStatistical,  // 3-sigma bound from the tail variance, always used
  kAuto,         // certified when affordable, statistical otherwise
};

struct EpsteinOptions {
  TailPolicy policy = TailPolicy::kAuto;
  // Largest cutoff volume V_n r^n for the certified policy before kAuto
  // switches to the statistical bound.
  double max_certified_volume = 2e6;
  // Largest cutoff volume overall.
  double max_volume = 2e7;
  // Grow the certified cutoff volume by 1.25 until two compensated sums agree to tol/4.
  bool adaptive_check = true;
  EnumerationLimits limits{2e8, 2e8};
};

enum class Side { kPrimal, kDual };

struct LatticeSum {
  double value = 0;          // compensated sum' G(s, pi |m|^2)
  double tail_bound = 0;     // bound on |value - exact|
  double cutoff_volume = 0;  // V_n r^n
  bool certified = false;
};

struct ZetaEvaluation {
  double s = 0;
  double value = 0;
  double cutoff_volume = 0;  // largest cutoff used by either lattice sum
  double tail_bound = 0;
  bool certified = false;
};

struct DirectSum {
  double value = 0;
  double tail_bound = 0;
};

// Mean of the discarded tail, T(s, X) = int_1^inf t^{s-1-n/2} Q(n/2, X t) dt.
double compensation_tail(int n, double s, double X);
// Standard deviation bound of the discarded tail around its mean,
// sqrt(5 / Gamma(n/2) int_X^inf G(s, u)^2 u^{n/2-1} du).
double tail_sigma(int n, double s, double X);

// Caches the reduced lattice, its dual and their enumerations so that several
// quantities of one lattice share a single enumeration per side.
class EpsteinEvaluator {
 public:
  explicit EpsteinEvaluator(const Lattice& lattice, EpsteinOptions options = {});
  ~EpsteinEvaluator();
  EpsteinEvaluator(EpsteinEvaluator&&) noexcept;
  EpsteinEvaluator& operator=(EpsteinEvaluator&&) noexcept;

  int dim() const { return n_; }

  LatticeSum G_sum(Side side, double s, double tol);
  // H_n of the primal or dual lattice; second member is the tail bound.
  LatticeSum H(Side side, double s, double tol);
  ZetaEvaluation F(double s, double tol);
  ZetaEvaluation E(double s, double tol);
  double E_normalized(double c, double tol);
  double E_hat(double c, double tol);
  double height(double tol);
  double height_statistic(double tol);

  // Normalized volumes of the primal lattice up to vmax, from the cache.
  VectorLengthList volumes(Side side, double vmax);

 private:
  struct SideData;
  const std::vector<double>& lengths(Side side, double radius2);
  double partial_sum(Side side, double s, double radius2);
  double point_count(Side side, double radius2);

  int n_;
  EpsteinOptions options_;
  std::unique_ptr<SideData> primal_;
  std::unique_ptr<SideData> dual_;
};

LatticeSum H_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options = {});
ZetaEvaluation F_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options = {});
// Domain s > -1, s != n/2; s = 0 returns exactly -1.
ZetaEvaluation E_n_eval(const Lattice& lattice, double s, double tol, const EpsteinOptions& options = {});
// V_n^{-2c} E_n(L, c n) for 0 < c < 1/2, tol applies to the normalized value.
double E_n_normalized(const Lattice& lattice, double c, double tol, const EpsteinOptions& options = {});
// V_n^{-2c} E_n(L, c n) + 1/(1 - 2c), continued to c = 1/2.
double E_hat(const Lattice& lattice, double c, double tol, const EpsteinOptions& options = {});
double height(const Lattice& lattice, double tol, const EpsteinOptions& options = {});
double height_statistic(const Lattice& lattice, double tol = 1e-6, const EpsteinOptions& options = {});
// log(4 pi) - gamma + 1
double height_limit_constant();

// sum'_{|m| <= R} |m|^{-2s} plus the mean of the rest; s > n/2.
DirectSum direct_epstein_sum(const Lattice& lattice, double s, double cutoff_radius, double tol);

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_EPSTEIN_HPP
