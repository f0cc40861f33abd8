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


#ifndef EPSTEIN_LAB_LATTICE_HPP
#define EPSTEIN_LAB_LATTICE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epstein_lab/parallel.hpp"

namespace epstein_lab {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Where a sampled lattice came from. hecke is the normalized functional
// (a_1, ..., a_n) mod p whose kernel is the sampled sublattice; its last
// nonzero entry, at index pivot, equals 1.
struct LatticeProvenance {
  std::uint64_t p = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<std::int64_t> hecke;
  int pivot = -1;
  bool dual = false;  // the lattice is the dual of the Hecke sublattice
};

// basis = exp(log_scale) * rows, with rows an exact integer matrix.
struct IntegralForm {
  IntMatrix rows;
  double log_scale = 0.0;
};

class Lattice {
 public:
  // Validates |det(basis)| = 1 within 1e-9 and throws CovolumeError otherwise.
  explicit Lattice(Eigen::MatrixXd basis,
                   std::optional<LatticeProvenance> provenance = std::nullopt);
  // Basis built from an integral form; the dual form, if given, must be the
  // integer rows of the inverse transpose.
  Lattice(IntegralForm primal, std::optional<IntegralForm> dual,
          std::optional<LatticeProvenance> provenance = std::nullopt);

  static Lattice identity(int n);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::optional<LatticeProvenance>& provenance() const { return provenance_; }
  const std::optional<IntegralForm>& integral_form() const { return primal_; }
  const std::optional<IntegralForm>& dual_integral_form() const { return dual_; }

 private:
  friend Lattice dual(const Lattice& lattice);
  friend struct LllOutput lll_reduce_with_transform(const Lattice& lattice);

  Lattice() = default;

  Eigen::MatrixXd basis_;
  std::optional<LatticeProvenance> provenance_;
  std::optional<IntegralForm> primal_;
  std::optional<IntegralForm> dual_;
  // Inverse transpose of basis_, when known without a fresh inversion.
  std::optional<Eigen::MatrixXd> dual_basis_;
};

bool is_prime(std::uint64_t p);

// Uniformly random index-p sublattice of Z^n scaled to covolume 1.
// Requires p prime and p < 2^53.
Lattice hecke_sample(int n, std::uint64_t p, Rng& rng);
// Same sublattice for a given normalized functional.
Lattice hecke_lattice(int n, std::uint64_t p, const std::vector<std::int64_t>& hecke);

Lattice dual(const Lattice& lattice);
Eigen::MatrixXd gram(const Lattice& lattice);

Lattice read_lattice(const std::filesystem::path& path);
void write_lattice(const Lattice& lattice, const std::filesystem::path& path);
Lattice parse_lattice(const std::string& text);
std::string format_lattice(const Lattice& lattice);

// Batch of Hecke lattices for (n, p, seed), one per trial stream. When
// cache_dir is non-empty the normalized functionals are stored there and
// reused on the next call with the same key.
std::vector<Lattice> hecke_batch(int n, std::uint64_t p, std::uint64_t seed, std::size_t count,
                                 const std::filesystem::path& cache_dir = {});

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_LATTICE_HPP
