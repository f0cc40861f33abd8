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


// Intensity-1/2 Poisson process on (0, A] and the compensated functionals
//   H(c)  = int_0^inf V^{-2c} dR(V),       R(V) = N(V) - V, N = 2 #{T_j <= V},
//   Z_0   = 2 sum_{T_j <= A} 1/T_j - log A + int_A^inf V^{-1} dR(V).
// The part beyond the horizon A is replaced by an independent Gaussian with
// the exact mean and variance of the discarded integral.

#ifndef EPSTEIN_LAB_POISSON_HPP
#define EPSTEIN_LAB_POISSON_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "epstein_lab/parallel.hpp"

namespace epstein_lab::poisson {

struct PoissonRealization {
  double A = 0;
  std::vector<double> points;  // strictly ascending, in (0, A]
};

PoissonRealization simulate_points(double A, Rng& rng);

// 2 sum_{T_j <= A} T_j^{-2c} - A^{1-2c} / (1-2c), c in (1/4, 1/2).
double H_truncated(const PoissonRealization& real, double c);
// Same with points T_j <= delta dropped and the compensator started at delta.
double H_delta(const PoissonRealization& real, double c, double delta);
// 2 sum_{T_j <= A} 1/T_j - log A.
double Z0_truncated(const PoissonRealization& real);

// Cumulants of the discarded tail int_A^inf V^{-2c} dR(V):
// kappa_k = 2^{k-1} A^{1-2ck} / (2ck - 1).
struct TailCumulants {
  double variance;
  double kappa3;
  double kappa4;
};
TailCumulants tail_cumulants(double c, double A);

double H_sample(double c, double A, Rng& rng);
double H_delta_sample(double c, double delta, double A, Rng& rng);
double Z0_sample(double A, Rng& rng);
double gaussian_rescaled_sample(double c, double A, Rng& rng);
// H(c_1), ..., H(c_k) from one realization with a jointly Gaussian tail.
std::vector<double> H_joint_sample(const std::vector<double>& cs, double A, Rng& rng);

// Truncated H on an ascending grid in (1/4, 1/2], all from one realization;
// the entry at c = 1/2 is the Z_0 form.
std::vector<double> H_path(const PoissonRealization& real, const std::vector<double>& c_grid);

// Set partitions of {0, ..., k-1} without singleton blocks, each block in
// ascending order. Deterministic order; k <= 16.
inline constexpr int kMaxPartitionSize = 16;
using Partition = std::vector<std::vector<int>>;
// Calls fn for each partition until it returns false.
void for_each_partition_no_singletons(int k, const std::function<bool(const Partition&)>& fn);
std::vector<Partition> partitions_no_singletons(int k);

// E[prod_j H(c_j, delta)] = sum_P 2^{k-#P} delta^{#P - 2 sum c} prod_B 1/(2 sum_B c - 1).
double moments_exact(const std::vector<double>& c_list, double delta);

struct NegativityOptions {
  double grid_step = 2e-3;
  std::size_t trials = 100000;
  double A = 1e4;
  std::uint64_t master_seed = 1;
  bool gaussian_tail = true;
  Execution execution = Execution::kParallel;
};

struct NegativityEstimate {
  double estimate;
  double ci_low;
  double ci_high;
  std::size_t negative;
  std::size_t trials;
};

// Fraction of trials with H(c) < 0 on a grid over [c1, c2] (c = 1/2 itself,
// where H diverges to -inf, is left out), refined x4 near local maxima that
// come within one grid step's variation of zero. Wilson 95% interval.
NegativityEstimate negativity_probability(double c1, double c2, const NegativityOptions& options);

struct WilsonInterval {
  double low;
  double high;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

}  // namespace epstein_lab::poisson

#endif  // EPSTEIN_LAB_POISSON_HPP
