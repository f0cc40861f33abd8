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


#include <cmath>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/error.hpp"

namespace epstein_lab {
namespace {

using i128 = __int128;
constexpr std::int64_t kEntryLimit = std::int64_t{1} << 62;
constexpr long kMaxSwaps = 50'000'000;

std::int64_t checked(i128 v) {
  if (v >= kEntryLimit || v <= -kEntryLimit) throw ResourceError("LLL: integer entry overflow");
  return static_cast<std::int64_t>(v);
}

template <class T>
long double dot(const std::vector<T>& a, const std::vector<T>& b) {
  if constexpr (std::is_integral_v<T>) {
    i128 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<i128>(a[i]) * b[i];
    return static_cast<long double>(s);
  } else {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
}

// Reduces rows in place and keeps u (row transform) and uinv (its inverse)
// in sync.
template <class T>
void lll(std::vector<std::vector<T>>& b, IntMatrix& u, IntMatrix& uinv) {
  const int n = static_cast<int>(b.size());
  u = IntMatrix::Identity(n, n);
  uinv = IntMatrix::Identity(n, n);
  if (n < 2) return;
  std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0));
  std::vector<std::vector<long double>> r(n, std::vector<long double>(n, 0));
  std::vector<long double> bsq(n, 0);

  auto gso_row = [&](int i) {
    for (int j = 0; j < i; ++j) {
      long double s = dot(b[i], b[j]);
      for (int l = 0; l < j; ++l) s -= mu[j][l] * r[i][l];
      r[i][j] = s;
      mu[i][j] = s / bsq[j];
    }
    long double s = dot(b[i], b[i]);
    for (int l = 0; l < i; ++l) s -= mu[i][l] * r[i][l];
    bsq[i] = s;
  };

  auto sub_row = [&](int k, int j, std::int64_t q) {
    for (int c = 0; c < n; ++c) {
      if constexpr (std::is_integral_v<T>) {
        b[k][c] = checked(static_cast<i128>(b[k][c]) - static_cast<i128>(q) * b[j][c]);
      } else {
        b[k][c] -= static_cast<long double>(q) * b[j][c];
      }
      u(k, c) = checked(static_cast<i128>(u(k, c)) - static_cast<i128>(q) * u(j, c));
      uinv(c, j) = checked(static_cast<i128>(uinv(c, j)) + static_cast<i128>(q) * uinv(c, k));
    }
  };

  gso_row(0);
  int k = 1;
  long swaps = 0;
  while (k < n) {
    gso_row(k);
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (int j = k - 1; j >= 0; --j) {
        if (std::fabs(mu[k][j]) <= 0.51L) continue;
        const long double qf = std::nearbyint(mu[k][j]);
        if (std::fabs(qf) >= 4e18L) throw ResourceError("LLL: size-reduction coefficient overflow");
        const auto q = static_cast<std::int64_t>(qf);
        sub_row(k, j, q);
        for (int l = 0; l < j; ++l) mu[k][l] -= qf * mu[j][l];
        mu[k][j] -= qf;
        changed = true;
      }
      if (!changed) break;
      gso_row(k);
    }
    if (bsq[k] >= (kLllDelta - mu[k][k - 1] * mu[k][k - 1]) * bsq[k - 1]) {
      ++k;
      continue;
    }
    std::swap(b[k], b[k - 1]);
    u.row(k).swap(u.row(k - 1));
    uinv.col(k).swap(uinv.col(k - 1));
    if (++swaps > kMaxSwaps) throw ResourceError("LLL: swap limit exceeded");
    if (k - 1 == 0) gso_row(0);
    k = std::max(k - 1, 1);
  }
}

}  // namespace

LllOutput lll_reduce_with_transform(const Lattice& lattice) {
  const int n = lattice.dim();
  IntMatrix u, uinv;
  if (const auto& form = lattice.integral_form()) {
    std::vector<std::vector<std::int64_t>> b(n, std::vector<std::int64_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b[i][j] = form->rows(i, j);
    lll(b, u, uinv);
    IntegralForm primal{IntMatrix(n, n), form->log_scale};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) primal.rows(i, j) = b[i][j];
    std::optional<IntegralForm> dual;
    if (const auto& d = lattice.dual_integral_form()) {
      IntegralForm nd{IntMatrix::Zero(n, n), d->log_scale};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          i128 s = 0;
          for (int l = 0; l < n; ++l) s += static_cast<i128>(uinv(l, i)) * d->rows(l, j);
          nd.rows(i, j) = checked(s);
        }
      dual = std::move(nd);
    }
    return {Lattice(std::move(primal), std::move(dual), lattice.provenance()), u};
  }
  std::vector<std::vector<long double>> b(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i][j] = lattice.basis()(i, j);
  lll(b, u, uinv);
  // Rebuild from the exact transform rather than the accumulated rows.
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long double s = 0;
      for (int l = 0; l < n; ++l) s += static_cast<long double>(u(i, l)) * lattice.basis()(l, j);
      basis(i, j) = static_cast<double>(s);
    }
  Lattice reduced(std::move(basis), lattice.provenance());
  if (lattice.dual_basis_) {
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        long double s = 0;
        for (int l = 0; l < n; ++l) s += static_cast<long double>(uinv(l, i)) * (*lattice.dual_basis_)(l, j);
        d(i, j) = static_cast<double>(s);
      }
    reduced.dual_basis_ = std::move(d);
  }
  return {std::move(reduced), u};
}

Lattice lll_reduce(const Lattice& lattice) { return lll_reduce_with_transform(lattice).reduced; }

}  // namespace epstein_lab
