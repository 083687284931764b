// Copyright 2026 The agreelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "agreelab/fuzz.hpp"
#include "agreelab/process.hpp"
#include "agreelab/random.hpp"

namespace {

using namespace agree;

struct TableCase {
  ProcessMatrix w;
  std::vector<ChoiOperator> alice, bob, event;
};

// Mixture of the two causal orders with all labs d -> d.
TableCase MakeCase(std::size_t d) {
  Rng rng(17);
  const DensityMatrix rho = RandomDensityMatrix(rng, d, d);
  LabDims dims;
  for (Lab l : {Lab::kAlice, Lab::kBob, Lab::kEvent}) dims[l] = {d, d};
  const ProcessMatrix abe =
      embed_definite_order(rho, {Lab::kAlice, Lab::kBob, Lab::kEvent}, dims);
  const ProcessMatrix bae =
      embed_definite_order(rho, {Lab::kBob, Lab::kAlice, Lab::kEvent}, dims);
  return {mix_processes({abe, bae}, {0.5, 0.5}),
          ChoiOperators(RandomInstrument(rng, d, d, d)),
          ChoiOperators(RandomInstrument(rng, d, d, d)),
          ChoiOperators(RandomInstrument(rng, d, d, 2))};
}

void BM_ProcessTable(benchmark::State& state) {
  const TableCase c = MakeCase(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(process_table(c.w, c.alice, c.bob, c.event));
  }
}

void BM_ProcessTableSerial(benchmark::State& state) {
  const TableCase c = MakeCase(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(process_table_serial(c.w, c.alice, c.bob, c.event));
  }
}

FuzzOptions SearchOptions(int backend) {
  FuzzOptions o;
  o.backend = static_cast<FuzzBackend>(backend);
  o.trials = 64;
  o.seed = 5;
  return o;
}

void BM_FuzzSearch(benchmark::State& state) {
  const FuzzOptions o = SearchOptions(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fuzz_search(o));
  state.SetLabel(FuzzBackendName(o.backend));
}

void BM_FuzzSearchSerial(benchmark::State& state) {
  const FuzzOptions o = SearchOptions(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fuzz_search_serial(o));
  state.SetLabel(FuzzBackendName(o.backend));
}

}  // namespace

BENCHMARK(BM_ProcessTable)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProcessTableSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuzzSearch)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuzzSearchSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
