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


#include "epstein_lab/poisson.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "epstein_lab/error.hpp"

namespace epstein_lab::poisson {
namespace {

constexpr double kGapMean = 2.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_c(double c, const char* what) {
  require(c > 0.25 && c < 0.5, std::string(what) + ": c must lie in (1/4, 1/2)");
}

// Calls visit(T) for each point of an intensity-1/2 process on (0, A].
template <class Visit>
void stream_points(double A, Rng& rng, Visit&& visit) {
  std::exponential_distribution<double> gap(1.0 / kGapMean);
  double t = gap(rng);
  while (t <= A) {
    visit(t);
    t += gap(rng);
  }
}

double compensator(double c, double A) { return std::pow(A, 1.0 - 2.0 * c) / (1.0 - 2.0 * c); }

double tail_cov(double c1, double c2, double A) {
  const double e = 2.0 * (c1 + c2) - 1.0;
  return 2.0 * std::pow(A, -e) / e;
}

// Columns scale independent N(0,1) draws into the joint tail on a c-grid.
Eigen::MatrixXd tail_factor(const std::vector<double>& cs, double A) {
  const int m = static_cast<int>(cs.size());
  Eigen::MatrixXd cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cov(i, j) = tail_cov(cs[i], cs[j], A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double top = lam.maxCoeff();
  std::vector<int> keep;
  for (int i = m - 1; i >= 0; --i)
    if (lam(i) > 1e-14 * top) keep.push_back(i);
  Eigen::MatrixXd f(m, static_cast<int>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    f.col(static_cast<int>(k)) = eig.eigenvectors().col(keep[k]) * std::sqrt(lam(keep[k]));
  return f;
}

}  // namespace

PoissonRealization simulate_points(double A, Rng& rng) {
  require(A > 0 && std::isfinite(A), "simulate_points: A must be > 0");
  PoissonRealization r;
  r.A = A;
  stream_points(A, rng, [&](double t) { r.points.push_back(t); });
  return r;
}

double H_truncated(const PoissonRealization& real, double c) {
  check_c(c, "H_truncated");
  double s = 0;
  for (double t : real.points) s += std::pow(t, -2.0 * c);
  return 2.0 * s - compensator(c, real.A);
}

double H_delta(const PoissonRealization& real, double c, double delta) {
  check_c(c, "H_delta");
  require(delta > 0 && delta < real.A, "H_delta: delta must lie in (0, A)");
  double s = 0;
  for (double t : real.points)
    if (t > delta) s += std::pow(t, -2.0 * c);
  return 2.0 * s - (compensator(c, real.A) - compensator(c, delta));
}

double Z0_truncated(const PoissonRealization& real) {
  double s = 0;
  for (double t : real.points) s += 1.0 / t;
  return 2.0 * s - std::log(real.A);
}

TailCumulants tail_cumulants(double c, double A) {
  require(c > 0.25 && c <= 0.5, "tail_cumulants: c must lie in (1/4, 1/2]");
  require(A > 0, "tail_cumulants: A must be > 0");
  auto kappa = [&](int k) {
    const double e = 2.0 * c * k - 1.0;
    return std::pow(2.0, k - 1) * std::pow(A, -e) / e;
  };
  return {kappa(2), kappa(3), kappa(4)};
}

double H_sample(double c, double A, Rng& rng) {
  check_c(c, "H_sample");
  require(A >= 10, "H_sample: A must be >= 10");
  double s = 0;
  stream_points(A, rng, [&](double t) { s += std::exp(-2.0 * c * std::log(t)); });
  std::normal_distribution<double> tail(0.0, std::sqrt(tail_cumulants(c, A).variance));
  return 2.0 * s - compensator(c, A) + tail(rng);
}

double H_delta_sample(double c, double delta, double A, Rng& rng) {
  check_c(c, "H_delta_sample");
  require(A >= 10, "H_delta_sample: A must be >= 10");
  require(delta > 0 && delta < A, "H_delta_sample: delta must lie in (0, A)");
  double s = 0;
  stream_points(A, rng, [&](double t) {
    if (t > delta) s += std::exp(-2.0 * c * std::log(t));
  });
  std::normal_distribution<double> tail(0.0, std::sqrt(tail_cumulants(c, A).variance));
  return 2.0 * s - (compensator(c, A) - compensator(c, delta)) + tail(rng);
}

double Z0_sample(double A, Rng& rng) {
  require(A >= 10, "Z0_sample: A must be >= 10");
  double s = 0;
  stream_points(A, rng, [&](double t) { s += 1.0 / t; });
  std::normal_distribution<double> tail(0.0, std::sqrt(2.0 / A));
  return 2.0 * s - std::log(A) + tail(rng);
}

double gaussian_rescaled_sample(double c, double A, Rng& rng) {
  check_c(c, "gaussian_rescaled_sample");
  return std::sqrt(2.0 * c - 0.5) * H_sample(c, A, rng);
}

std::vector<double> H_joint_sample(const std::vector<double>& cs, double A, Rng& rng) {
  require(!cs.empty(), "H_joint_sample: empty c list");
  for (double c : cs) check_c(c, "H_joint_sample");
  require(A >= 10, "H_joint_sample: A must be >= 10");
  const std::size_t k = cs.size();
  std::vector<double> sums(k, 0.0);
  stream_points(A, rng, [&](double t) {
    const double lt = std::log(t);
    for (std::size_t i = 0; i < k; ++i) sums[i] += std::exp(-2.0 * cs[i] * lt);
  });
  const Eigen::MatrixXd f = tail_factor(cs, A);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(f.cols());
  for (int i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const Eigen::VectorXd tail = f * z;
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = 2.0 * sums[i] - compensator(cs[i], A) + tail(static_cast<int>(i));
  return out;
}

std::vector<double> H_path(const PoissonRealization& real, const std::vector<double>& c_grid) {
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    require(c_grid[i] > 0.25 && c_grid[i] <= 0.5, "H_path: grid must lie in (1/4, 1/2]");
    require(i == 0 || c_grid[i] > c_grid[i - 1], "H_path: grid must be ascending");
  }
  std::vector<double> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) out.push_back(c == 0.5 ? Z0_truncated(real) : H_truncated(real, c));
  return out;
}

void for_each_partition_no_singletons(int k, const std::function<bool(const Partition&)>& fn) {
  require(k >= 0, "partitions: k must be >= 0");
  if (k > kMaxPartitionSize) throw ResourceError("partitions: k exceeds the cap of 16");
  Partition blocks;
  bool stop = false;
  std::function<void(int, int)> rec = [&](int i, int singles) {
    if (stop) return;
    if (singles > k - i) return;  // not enough elements left to fill singletons
    if (i == k) {
      if (!fn(blocks)) stop = true;
      return;
    }
    // Indexed: the recursion appends to blocks and may reallocate it.
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const int delta = blocks[j].size() == 1 ? -1 : 0;
      blocks[j].push_back(i);
      rec(i + 1, singles + delta);
      blocks[j].pop_back();
      if (stop) return;
    }
    blocks.push_back({i});
    rec(i + 1, singles + 1);
    blocks.pop_back();
  };
  rec(0, 0);
}

std::vector<Partition> partitions_no_singletons(int k) {
  std::vector<Partition> out;
  for_each_partition_no_singletons(k, [&](const Partition& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

double moments_exact(const std::vector<double>& c_list, double delta) {
  require(!c_list.empty(), "moments_exact: empty c list");
  require(delta > 0, "moments_exact: delta must be > 0");
  for (double c : c_list) check_c(c, "moments_exact");
  const int k = static_cast<int>(c_list.size());
  double csum = 0;
  for (double c : c_list) csum += c;
  double total = 0;
  for_each_partition_no_singletons(k, [&](const Partition& p) {
    const int blocks = static_cast<int>(p.size());
    double term = std::pow(2.0, k - blocks) * std::pow(delta, blocks - 2.0 * csum);
    for (const auto& b : p) {
      double bs = 0;
      for (int j : b) bs += c_list[j];
      term /= 2.0 * bs - 1.0;
    }
    total += term;
    return true;
  });
  return total;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  require(trials > 0, "wilson_interval: no trials");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  // The bounds are exactly 0 and 1 at the extremes; the formula leaves roundoff.
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

NegativityEstimate negativity_probability(double c1, double c2, const NegativityOptions& o) {
  require(c1 > 0.25 && c1 < c2 && c2 <= 0.5, "negativity_probability: need 1/4 < c1 < c2 <= 1/2");
  require(o.grid_step > 0, "negativity_probability: grid_step must be > 0");
  require(o.trials > 0, "negativity_probability: trials must be > 0");
  require(o.A >= 10, "negativity_probability: A must be >= 10");
  const int steps = std::max(1, static_cast<int>(std::ceil((c2 - c1) / o.grid_step - 1e-9)));
  const double h = (c2 - c1) / steps;
  // Fine grid carries the tail process; coarse point g is fine point 4g.
  std::vector<double> fine;
  for (int f = 0; f <= 4 * steps; ++f) {
    const double c = c1 + 0.25 * h * f;
    if (c >= 0.5 - 1e-12) break;
    fine.push_back(c);
  }
  const int n_coarse = (static_cast<int>(fine.size()) - 1) / 4 + 1;
  const Eigen::MatrixXd factor = o.gaussian_tail ? tail_factor(fine, o.A) : Eigen::MatrixXd();
  std::vector<double> comp(fine.size());
  for (std::size_t f = 0; f < fine.size(); ++f) comp[f] = -compensator(fine[f], o.A);

  auto trial = [&](std::size_t, Rng& rng) -> char {
    std::vector<double> logt;
    stream_points(o.A, rng, [&](double t) { logt.push_back(std::log(t)); });
    std::vector<double> tail(fine.size(), 0.0);
    if (o.gaussian_tail) {
      std::normal_distribution<double> normal;
      Eigen::VectorXd z(factor.cols());
      for (int i = 0; i < z.size(); ++i) z(i) = normal(rng);
      const Eigen::VectorXd t = factor * z;
      for (std::size_t f = 0; f < fine.size(); ++f) tail[f] = t(static_cast<int>(f));
    }
    const std::size_t m = logt.size();
    std::vector<double> v(m), r(m);
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = std::exp(-2.0 * c1 * logt[j]);
      r[j] = std::exp(-2.0 * h * logt[j]);
    }
    std::vector<double> H(n_coarse);
    for (int g = 0; g < n_coarse; ++g) {
      double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += v[j];
      H[g] = 2.0 * s + comp[4 * g] + tail[4 * g];
      if (H[g] >= 0) return 0;
      for (std::size_t j = 0; j < m; ++j) v[j] *= r[j];
    }
    auto at_fine = [&](int f) {
      double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += std::exp(-2.0 * fine[f] * logt[j]);
      return 2.0 * s + comp[f] + tail[f];
    };
    const int n_fine = static_cast<int>(fine.size());
    for (int g = 0; g < n_coarse; ++g) {
      const double left = g > 0 ? H[g - 1] : -HUGE_VAL;
      const double right = g + 1 < n_coarse ? H[g + 1] : -HUGE_VAL;
      if (H[g] < left || H[g] < right) continue;
      double variation = 0;
      if (g > 0) variation = std::max(variation, H[g] - H[g - 1]);
      if (g + 1 < n_coarse) variation = std::max(variation, H[g] - H[g + 1]);
      if (H[g] + variation < 0) continue;
      for (int d = -3; d <= 3; ++d) {
        const int f = 4 * g + d;
        if (d == 0 || f < 0 || f >= n_fine) continue;
        if (at_fine(f) >= 0) return 0;
      }
    }
    return 1;
  };
  const auto flags = run_trials(o.trials, o.master_seed, trial, o.execution);
  std::size_t negative = 0;
  for (char f : flags) negative += f;
  const WilsonInterval ci = wilson_interval(negative, o.trials);
  return {static_cast<double>(negative) / o.trials, ci.low, ci.high, negative, o.trials};
}

}  // namespace epstein_lab::poisson
