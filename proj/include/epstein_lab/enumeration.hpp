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


#ifndef EPSTEIN_LAB_ENUMERATION_HPP
#define EPSTEIN_LAB_ENUMERATION_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "epstein_lab/lattice.hpp"

namespace epstein_lab {

struct LllOutput {
  Lattice reduced;
  // reduced.basis() = transform * input.basis()
  IntMatrix transform;
};

inline constexpr double kLllDelta = 0.99;

// LLL with delta = 0.99. Lattices with an integral form are reduced in exact
// integer arithmetic; others in long double with an integer transform.
LllOutput lll_reduce_with_transform(const Lattice& lattice);
Lattice lll_reduce(const Lattice& lattice);

struct EnumerationLimits {
  double max_nodes = 5e7;
  // Cap on the predicted number of vectors, 2 V_n r^n times a safety factor 2.
  double max_points = 5e7;
};

struct LatticeVector {
  std::vector<std::int64_t> coeffs;  // in the input basis
  double sq_length;
};

// One representative of each +-pair of non-zero vectors with |v| <= radius,
// sorted by squared length, ties in lexicographic coefficient order.
std::vector<LatticeVector> vectors_within(const Lattice& lattice, double radius,
                                          const EnumerationLimits& limits = {});

// Ascending squared lengths only; one entry per +-pair. Reuses an already
// reduced lattice so repeated calls do not repeat the reduction.
class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const Lattice& lattice, EnumerationLimits limits = {});

  int dim() const { return n_; }
  std::vector<double> squared_lengths(double radius) const;
  // Number of enumeration nodes visited by the last call, for diagnostics.
  double last_node_count() const { return last_nodes_; }

 private:
  int n_;
  EnumerationLimits limits_;
  std::vector<double> q_diag_;   // r_ii^2
  std::vector<double> q_upper_;  // r_ij / r_ii, row-major n x n
  mutable double last_nodes_ = 0;
};

struct VectorLengthList {
  int dim = 0;
  double vmax = 0;
  std::vector<double> volumes;     // V_n l_j^n, ascending
  std::vector<double> sq_lengths;  // l_j^2
};

VectorLengthList vector_lengths(const Lattice& lattice, double vmax,
                                const EnumerationLimits& limits = {});
VectorLengthList vector_lengths(const ShortVectorEnumerator& enumerator, double vmax);

struct CountingValue {
  std::int64_t N;
  double R;
};
CountingValue counting_functions(const VectorLengthList& vl, double V);

void write_vector_lengths_csv(const VectorLengthList& vl, std::ostream& out);

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_ENUMERATION_HPP
