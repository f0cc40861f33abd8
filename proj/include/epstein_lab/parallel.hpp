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


// Per-trial random streams and the trial runner shared by every Monte Carlo
// loop. Trial t always draws from a stream derived from (master_seed, t), so
// the OpenMP and serial runners produce identical output.

#ifndef EPSTEIN_LAB_PARALLEL_HPP
#define EPSTEIN_LAB_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace epstein_lab {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ULL)));
}

enum class Execution { kSerial, kParallel };

// Calls fn(t, rng) for t in [0, count) and collects the results in trial
// order. Exceptions thrown by fn are rethrown on the calling thread.
template <class Fn>
auto run_trials(std::size_t count, std::uint64_t master_seed, Fn&& fn,
                Execution exec = Execution::kParallel) {
  using T = decltype(fn(std::size_t{0}, std::declval<Rng&>()));
  std::vector<T> out(count);
  if (exec == Execution::kSerial) {
    for (std::size_t t = 0; t < count; ++t) {
      Rng rng = trial_rng(master_seed, t);
      out[t] = fn(t, rng);
    }
    return out;
  }
  std::exception_ptr error;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long t = 0; t < n; ++t) {
    try {
      Rng rng = trial_rng(master_seed, static_cast<std::uint64_t>(t));
      out[t] = fn(static_cast<std::size_t>(t), rng);
    } catch (...) {
#pragma omp critical(epstein_lab_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_PARALLEL_HPP
