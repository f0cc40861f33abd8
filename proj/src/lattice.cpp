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


#include "epstein_lab/lattice.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <utility>

#include "epstein_lab/error.hpp"

namespace epstein_lab {
namespace {

constexpr double kCovolumeTol = 1e-9;
constexpr std::uint64_t kMaxPrime = 1ULL << 53;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

Eigen::MatrixXd scaled(const IntegralForm& form) {
  return form.rows.cast<double>() * std::exp(form.log_scale);
}

void check_covolume(const Eigen::MatrixXd& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw CovolumeError("lattice basis must be a non-empty square matrix");
  if (!basis.allFinite()) throw CovolumeError("lattice basis has non-finite entries");
  const double det = basis.partialPivLu().determinant();
  if (!(std::fabs(std::fabs(det) - 1.0) <= kCovolumeTol)) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "lattice covolume is " << std::fabs(det) << ", expected 1";
    throw CovolumeError(msg.str());
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Lattice::Lattice(Eigen::MatrixXd basis, std::optional<LatticeProvenance> provenance)
    : basis_(std::move(basis)), provenance_(std::move(provenance)) {
  check_covolume(basis_);
}

Lattice::Lattice(IntegralForm primal, std::optional<IntegralForm> dual,
                 std::optional<LatticeProvenance> provenance)
    : basis_(scaled(primal)), provenance_(std::move(provenance)), primal_(std::move(primal)),
      dual_(std::move(dual)) {
  check_covolume(basis_);
  if (dual_) {
    if (dual_->rows.rows() != basis_.rows() || dual_->rows.cols() != basis_.cols())
      throw CovolumeError("dual integral form has the wrong shape");
    dual_basis_ = scaled(*dual_);
  }
}

Lattice Lattice::identity(int n) {
  if (n < 1) throw DomainError("Lattice::identity: n must be >= 1");
  IntegralForm form{IntMatrix::Identity(n, n), 0.0};
  return Lattice(form, form);
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (p % q == 0) return p == q;
  }
  std::uint64_t d = p - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, p);
      if (x == p - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Lattice hecke_lattice(int n, std::uint64_t p, const std::vector<std::int64_t>& hecke) {
  if (n < 1) throw DomainError("hecke_lattice: n must be >= 1");
  if (!is_prime(p) || p >= kMaxPrime) throw DomainError("hecke_lattice: p must be a prime below 2^53");
  if (static_cast<int>(hecke.size()) != n) throw DomainError("hecke_lattice: functional has wrong length");
  int k = -1;
  for (int i = n - 1; i >= 0; --i) {
    if (hecke[i] != 0) {
      k = i;
      break;
    }
  }
  if (k < 0 || hecke[k] != 1) throw DomainError("hecke_lattice: functional is not normalized");
  for (auto a : hecke) {
    if (a < 0 || static_cast<std::uint64_t>(a) >= p) throw DomainError("hecke_lattice: entry out of range");
  }
  const auto pp = static_cast<std::int64_t>(p);
  const double logp = std::log(static_cast<double>(p));
  IntegralForm primal{IntMatrix::Identity(n, n), -logp / n};
  IntegralForm dual{IntMatrix::Zero(n, n), (1.0 / n - 1.0) * logp};
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    primal.rows(i, k) = -hecke[i];
    dual.rows(i, i) = pp;
  }
  primal.rows(k, k) = pp;
  for (int j = 0; j < n; ++j) dual.rows(k, j) = hecke[j];
  LatticeProvenance prov;
  prov.p = p;
  prov.hecke = hecke;
  prov.pivot = k;
  return Lattice(std::move(primal), std::move(dual), std::move(prov));
}

Lattice hecke_sample(int n, std::uint64_t p, Rng& rng) {
  if (n < 1) throw DomainError("hecke_sample: n must be >= 1");
  if (!is_prime(p) || p >= kMaxPrime) throw DomainError("hecke_sample: p must be a prime below 2^53");
  std::uniform_int_distribution<std::uint64_t> coord(0, p - 1);
  std::vector<std::uint64_t> v(n);
  int k = -1;
  while (k < 0) {
    for (auto& x : v) x = coord(rng);
    for (int i = n - 1; i >= 0; --i) {
      if (v[i] != 0) {
        k = i;
        break;
      }
    }
  }
  const std::uint64_t inv = powmod(v[k], p - 2, p);
  std::vector<std::int64_t> a(n, 0);
  for (int i = 0; i <= k; ++i) a[i] = static_cast<std::int64_t>(mulmod(v[i], inv, p));
  return hecke_lattice(n, p, a);
}

Lattice dual(const Lattice& lattice) {
  Lattice out;
  out.basis_ = lattice.dual_basis_ ? *lattice.dual_basis_
                                   : Eigen::MatrixXd(lattice.basis_.inverse().transpose());
  check_covolume(out.basis_);
  out.dual_basis_ = lattice.basis_;
  out.primal_ = lattice.dual_;
  out.dual_ = lattice.primal_;
  out.provenance_ = lattice.provenance_;
  if (out.provenance_) out.provenance_->dual = !out.provenance_->dual;
  return out;
}

Eigen::MatrixXd gram(const Lattice& lattice) {
  Eigen::MatrixXd g = lattice.basis() * lattice.basis().transpose();
  return 0.5 * (g + g.transpose());
}

std::string format_lattice(const Lattice& lattice) {
  std::ostringstream out;
  out << std::setprecision(17);
  const int n = lattice.dim();
  out << n << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << lattice.basis()(i, j);
    out << '\n';
  }
  if (const auto& prov = lattice.provenance()) {
    out << "# p " << prov->p << '\n';
    out << "# seed " << prov->seed << '\n';
    out << "# trial " << prov->trial << '\n';
    if (!prov->hecke.empty()) {
      out << "# dual " << (prov->dual ? 1 : 0) << '\n';
      out << "# hecke";
      for (auto a : prov->hecke) out << ' ' << a;
      out << '\n';
    }
  }
  return out.str();
}

Lattice parse_lattice(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!(ls >> n) || n < 1 || !(ls >> std::ws).eof())
      throw ParseError("line " + std::to_string(lineno) + ": expected the dimension n >= 1", lineno);
    break;
  }
  if (n == 0) throw ParseError("line " + std::to_string(lineno) + ": empty lattice file", lineno);
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("line " + std::to_string(lineno + 1) + ": expected " + std::to_string(n) +
                           " basis rows for n = " + std::to_string(n) + ", found " + std::to_string(i),
                       lineno + 1);
    }
    ++lineno;
    std::istringstream ls(line);
    int count = 0;
    double x = 0;
    while (ls >> x) {
      if (count < n) basis(i, count) = x;
      ++count;
    }
    if (!(ls.eof()) || count != n) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                           " values for n = " + std::to_string(n) + ", found " + std::to_string(count),
                       lineno);
    }
  }
  LatticeProvenance prov;
  bool has_prov = false;
  bool is_dual = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] != '#') {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                           " basis rows for n = " + std::to_string(n) + ", found extra data",
                       lineno);
    }
    std::istringstream ls(line.substr(1));
    std::string key;
    ls >> key;
    if (key == "p") {
      ls >> prov.p;
      has_prov = true;
    } else if (key == "seed") {
      ls >> prov.seed;
    } else if (key == "trial") {
      ls >> prov.trial;
    } else if (key == "dual") {
      int d = 0;
      ls >> d;
      is_dual = d != 0;
      prov.dual = is_dual;
    } else if (key == "hecke") {
      std::int64_t a = 0;
      while (ls >> a) prov.hecke.push_back(a);
    }
  }
  if (has_prov && static_cast<int>(prov.hecke.size()) == n) {
    Lattice exact = hecke_lattice(n, prov.p, prov.hecke);
    if (is_dual) exact = dual(exact);
    const double scale = std::max(1.0, basis.cwiseAbs().maxCoeff());
    if ((exact.basis() - basis).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      LatticeProvenance full = *exact.provenance();
      full.seed = prov.seed;
      full.trial = prov.trial;
      return Lattice(*exact.integral_form(), exact.dual_integral_form(), std::move(full));
    }
  }
  if (has_prov) return Lattice(std::move(basis), prov);
  return Lattice(std::move(basis));
}

Lattice read_lattice(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lattice file " + path.string(), 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lattice(buf.str());
}

void write_lattice(const Lattice& lattice, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write lattice file " + path.string());
  out << format_lattice(lattice);
}

std::vector<Lattice> hecke_batch(int n, std::uint64_t p, std::uint64_t seed, std::size_t count,
                                 const std::filesystem::path& cache_dir) {
  std::vector<std::vector<std::int64_t>> functionals;
  std::filesystem::path file;
  if (!cache_dir.empty()) {
    file = cache_dir / ("hecke_n" + std::to_string(n) + "_p" + std::to_string(p) + "_s" +
                        std::to_string(seed) + ".txt");
    std::ifstream in(file);
    std::string line;
    while (in && std::getline(in, line) && functionals.size() < count) {
      std::istringstream ls(line);
      std::vector<std::int64_t> a;
      std::int64_t x = 0;
      while (ls >> x) a.push_back(x);
      if (static_cast<int>(a.size()) != n) break;
      functionals.push_back(std::move(a));
    }
  }
  std::vector<Lattice> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    Lattice lat = [&] {
      if (t < functionals.size()) return hecke_lattice(n, p, functionals[t]);
      Rng rng = trial_rng(seed, t);
      return hecke_sample(n, p, rng);
    }();
    LatticeProvenance prov = *lat.provenance();
    prov.seed = seed;
    prov.trial = t;
    out.emplace_back(*lat.integral_form(), lat.dual_integral_form(), std::move(prov));
  }
  if (!file.empty() && functionals.size() < count) {
    std::filesystem::create_directories(cache_dir);
    std::ofstream outf(file);
    for (const auto& lat : out) {
      const auto& a = lat.provenance()->hecke;
      for (std::size_t i = 0; i < a.size(); ++i) outf << (i ? " " : "") << a[i];
      outf << '\n';
    }
  }
  return out;
}

}  // namespace epstein_lab
