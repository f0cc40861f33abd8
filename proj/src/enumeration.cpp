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


#include "epstein_lab/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "epstein_lab/error.hpp"
#include "epstein_lab/specfun.hpp"

namespace epstein_lab {
namespace {

constexpr double kSlack = 1e-9;

// Gram matrix of the reduced basis in long double. Exact for integral forms
// up to the final scaling.
Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> reduced_gram(const Lattice& reduced) {
  const int n = reduced.dim();
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> g(n, n);
  if (const auto& form = reduced.integral_form()) {
    const long double s2 = std::exp(2.0L * form->log_scale);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        __int128 d = 0;
        for (int l = 0; l < n; ++l) d += static_cast<__int128>(form->rows(i, l)) * form->rows(j, l);
        g(i, j) = g(j, i) = static_cast<long double>(d) * s2;
      }
    return g;
  }
  const auto b = reduced.basis().cast<long double>();
  g = b * b.transpose();
  return g;
}

void predicted_count_check(int n, double radius, const EnumerationLimits& limits) {
  const BallGeometry ball = ball_geometry(n);
  const double log_pred = std::log(4.0) + ball.log_volume + n * std::log(radius);
  if (log_pred > std::log(limits.max_points)) {
    throw ResourceError("enumeration: predicted point count exceeds the configured cap");
  }
}

// Fincke-Pohst depth-first search over x with sum_i q_ii (x_i - c_i)^2 <= bound,
// one representative per +- pair (topmost non-zero coefficient positive).
template <class Visit>
void fincke_pohst(int n, const std::vector<double>& qd, const std::vector<double>& qu, double bound,
                  double max_nodes, double& nodes, Visit&& visit) {
  std::vector<std::int64_t> x(n, 0), hi(n, 0);
  std::vector<double> center(n, 0.0), above(n + 1, 0.0);
  std::vector<char> zero_above(n + 1, 1);
  nodes = 0;

  auto set_level = [&](int i) {
    double c = 0;
    for (int j = i + 1; j < n; ++j) c -= qu[i * n + j] * static_cast<double>(x[j]);
    center[i] = c;
    const double rem = bound - above[i + 1];
    if (rem < 0) {
      x[i] = 1;
      hi[i] = 0;
      return;
    }
    const double w = std::sqrt(rem / qd[i]);
    auto lo = static_cast<std::int64_t>(std::ceil(c - w));
    hi[i] = static_cast<std::int64_t>(std::floor(c + w));
    if (zero_above[i + 1]) lo = std::max<std::int64_t>(lo, i == 0 ? 1 : 0);
    x[i] = lo;
  };

  int i = n - 1;
  set_level(i);
  while (true) {
    if (x[i] > hi[i]) {
      if (++i == n) return;
      ++x[i];
      continue;
    }
    if (++nodes > max_nodes) throw ResourceError("enumeration: node cap exceeded");
    const double d = static_cast<double>(x[i]) - center[i];
    const double len = above[i + 1] + qd[i] * d * d;
    if (len > bound) {
      ++x[i];
      continue;
    }
    if (i == 0) {
      visit(x, len);
      ++x[0];
      continue;
    }
    above[i] = len;
    zero_above[i] = zero_above[i + 1] && x[i] == 0;
    --i;
    set_level(i);
  }
}

void cholesky_factors(const Lattice& reduced, std::vector<double>& qd, std::vector<double>& qu) {
  const int n = reduced.dim();
  const auto g = reduced_gram(reduced);
  Eigen::LLT<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> llt(g);
  if (llt.info() != Eigen::Success) throw DomainError("enumeration: Gram matrix not positive definite");
  const auto lower = llt.matrixL().toDenseMatrix();  // g = L L^T, R = L^T
  qd.assign(n, 0.0);
  qu.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const long double rii = lower(i, i);
    qd[i] = static_cast<double>(rii * rii);
    for (int j = i + 1; j < n; ++j) qu[i * n + j] = static_cast<double>(lower(j, i) / rii);
  }
}

}  // namespace

std::vector<LatticeVector> vectors_within(const Lattice& lattice, double radius,
                                          const EnumerationLimits& limits) {
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("vectors_within: radius must be > 0");
  const int n = lattice.dim();
  predicted_count_check(n, radius, limits);
  const LllOutput red = lll_reduce_with_transform(lattice);
  std::vector<double> qd, qu;
  cholesky_factors(red.reduced, qd, qu);
  const double r2 = radius * radius;
  const double bound = r2 + kSlack;

  const auto& form = red.reduced.integral_form();
  const long double s2 = form ? std::exp(2.0L * form->log_scale) : 1.0L;
  const auto basis = red.reduced.basis().cast<long double>();

  std::vector<LatticeVector> out;
  double nodes = 0;
  fincke_pohst(n, qd, qu, bound, limits.max_nodes, nodes, [&](const std::vector<std::int64_t>& x, double) {
    long double sq = 0;
    if (form) {
      __int128 acc = 0;
      for (int c = 0; c < n; ++c) {
        __int128 v = 0;
        for (int i = 0; i < n; ++i) v += static_cast<__int128>(x[i]) * form->rows(i, c);
        acc += v * v;
      }
      sq = static_cast<long double>(acc) * s2;
    } else {
      for (int c = 0; c < n; ++c) {
        long double v = 0;
        for (int i = 0; i < n; ++i) v += static_cast<long double>(x[i]) * basis(i, c);
        sq += v * v;
      }
    }
    if (sq > bound) return;
    LatticeVector lv;
    lv.coeffs.assign(n, 0);
    for (int c = 0; c < n; ++c) {
      __int128 v = 0;
      for (int i = 0; i < n; ++i) v += static_cast<__int128>(x[i]) * red.transform(i, c);
      lv.coeffs[c] = static_cast<std::int64_t>(v);
    }
    // Canonical sign in the input basis: first non-zero coefficient positive.
    for (int c = 0; c < n; ++c) {
      if (lv.coeffs[c] == 0) continue;
      if (lv.coeffs[c] < 0)
        for (auto& a : lv.coeffs) a = -a;
      break;
    }
    lv.sq_length = static_cast<double>(sq);
    out.push_back(std::move(lv));
  });
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
    if (a.sq_length != b.sq_length) return a.sq_length < b.sq_length;
    return a.coeffs < b.coeffs;
  });
  return out;
}

ShortVectorEnumerator::ShortVectorEnumerator(const Lattice& lattice, EnumerationLimits limits)
    : n_(lattice.dim()), limits_(limits) {
  cholesky_factors(lll_reduce(lattice), q_diag_, q_upper_);
}

std::vector<double> ShortVectorEnumerator::squared_lengths(double radius) const {
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("squared_lengths: radius must be > 0");
  predicted_count_check(n_, radius, limits_);
  std::vector<double> out;
  const double bound = radius * radius + kSlack;
  fincke_pohst(n_, q_diag_, q_upper_, bound, limits_.max_nodes, last_nodes_,
               [&](const std::vector<std::int64_t>&, double len) { out.push_back(len); });
  std::sort(out.begin(), out.end());
  return out;
}

VectorLengthList vector_lengths(const ShortVectorEnumerator& enumerator, double vmax) {
  if (!(vmax > 0) || !std::isfinite(vmax)) throw DomainError("vector_lengths: vmax must be > 0");
  const int n = enumerator.dim();
  const BallGeometry ball = ball_geometry(n);
  const double radius = std::exp((std::log(vmax) - ball.log_volume) / n);
  VectorLengthList vl;
  vl.dim = n;
  vl.vmax = vmax;
  for (double sq : enumerator.squared_lengths(radius)) {
    const double v = std::exp(ball.log_volume + 0.5 * n * std::log(sq));
    if (v > vmax) continue;
    vl.volumes.push_back(v);
    vl.sq_lengths.push_back(sq);
  }
  return vl;
}

VectorLengthList vector_lengths(const Lattice& lattice, double vmax, const EnumerationLimits& limits) {
  return vector_lengths(ShortVectorEnumerator(lattice, limits), vmax);
}

CountingValue counting_functions(const VectorLengthList& vl, double V) {
  if (!(V >= 0)) throw DomainError("counting_functions: V must be >= 0");
  if (V > vl.vmax) throw CutoffError("counting_functions: V exceeds the enumeration cutoff", vl.vmax);
  const auto count = std::upper_bound(vl.volumes.begin(), vl.volumes.end(), V) - vl.volumes.begin();
  const std::int64_t N = 2 * static_cast<std::int64_t>(count);
  return {N, static_cast<double>(N) - V};
}

void write_vector_lengths_csv(const VectorLengthList& vl, std::ostream& out) {
  out << "j,volume_Vj,sq_length\n" << std::setprecision(17);
  for (std::size_t j = 0; j < vl.volumes.size(); ++j)
    out << (j + 1) << ',' << vl.volumes[j] << ',' << vl.sq_lengths[j] << '\n';
}

}  // namespace epstein_lab
