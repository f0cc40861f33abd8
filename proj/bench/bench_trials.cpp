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


// Serial reference against the OpenMP path of run_trials on three kernels.
// Each benchmark takes the execution mode as its argument (0 serial,
// 1 parallel) and refuses to report if the two modes disagree.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "epstein_lab/epstein.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/parallel.hpp"
#include "epstein_lab/poisson.hpp"

using namespace epstein_lab;

namespace {

constexpr std::uint64_t kSeed = 20260101;
constexpr std::uint64_t kPrime = 2147483647;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

template <class Fn>
void run(benchmark::State& state, std::size_t count, Fn fn) {
  if (run_trials(count, kSeed, fn, Execution::kSerial) != run_trials(count, kSeed, fn, Execution::kParallel)) {
    state.SkipWithError("serial and parallel results differ");
    return;
  }
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(count, kSeed, fn, mode(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count));
  state.counters["threads"] = mode(state) == Execution::kSerial ? 1 : omp_get_max_threads();
}

void BM_H_sample(benchmark::State& state) {
  run(state, 2000, [](std::size_t, Rng& rng) { return poisson::H_sample(0.35, 1e4, rng); });
}

void BM_Z0_sample(benchmark::State& state) {
  run(state, 2000, [](std::size_t, Rng& rng) { return poisson::Z0_sample(1e4, rng); });
}

void BM_E_normalized_n8(benchmark::State& state) {
  run(state, 64, [](std::size_t, Rng& rng) { return E_n_normalized(hecke_sample(8, kPrime, rng), 0.35, 1e-6); });
}

}  // namespace

BENCHMARK(BM_H_sample)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Z0_sample)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_E_normalized_n8)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
