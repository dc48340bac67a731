// Copyright 2026 The qjh Authors
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

// Serial reference vs OpenMP kernels for trajectory ensembles and full
// decoherence matrices.

#include <benchmark/benchmark.h>

#include "qjh/histories.hpp"
#include "qjh/trajectories.hpp"

namespace {

qjh::ModelParams busy() {
  qjh::ModelParams p;
  p.kappa = 0.5;
  p.gamma2 = 5.0;
  p.d_sys = 4;
  p.dt = 0.5;
  return p;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const qjh::TrajectorySampler s(busy(), 200.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qjh::sample_ensemble_serial(s, 1, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const qjh::TrajectorySampler s(busy(), 200.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qjh::sample_ensemble(s, 1, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DecoherenceSerial(benchmark::State& state) {
  qjh::ModelParams p;
  p.n_steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qjh::full_decoherence_matrix_serial(p));
}

void BM_DecoherenceParallel(benchmark::State& state) {
  qjh::ModelParams p;
  p.n_steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qjh::full_decoherence_matrix(p));
}

BENCHMARK(BM_EnsembleSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecoherenceSerial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecoherenceParallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
