// Copyright 2026 The permkiss Authors. All Rights Reserved.
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

#include <benchmark/benchmark.h>

#include "permkiss/grad.h"
#include "permkiss/kissing.h"
#include "permkiss/oracle.h"
#include "permkiss/random.h"
#include "permkiss/solvers.h"

namespace permkiss {
namespace {

FactorPair factors(Index n, int m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_factors(n, m, 10.0, rng);
}

void BM_LapLossDense(benchmark::State& state) {
  const Index n = state.range(0);
  const FactorPair fp = factors(n, 30, 1);
  Rng rng = make_rng(2);
  const Matrix cost = gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lap_loss(fp, cost, 1.0).value);
  state.SetComplexityN(n);
}
BENCHMARK(BM_LapLossDense)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_LapLossSparse(benchmark::State& state) {
  const Index n = state.range(0);
  const FactorPair fp = factors(n, 20, 3);
  const LapInstance inst = make_sparse_lap(n, 0.01, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lap_loss_sparse(fp, inst.sparse->support, inst.sparse->values, 1.0).value);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_LapLossSparse)->RangeMultiplier(2)->Range(256, 4096);

void BM_QapLoss(benchmark::State& state) {
  const Index n = state.range(0);
  const FactorPair fp = factors(n, static_cast<int>((n + 2) / 3), 5);
  Rng rng = make_rng(6);
  const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(qap_loss(fp, a, b, 0.5, 1.0).value);
}
BENCHMARK(BM_QapLoss)->Arg(12)->Arg(30)->Arg(100)->Arg(256);

void BM_AlignTwoEntry(benchmark::State& state) {
  const Index n = state.range(0);
  const AlignProblem p = make_align_problem(n, 0, 7);
  Rng rng = make_rng(8);
  std::vector<Entry> list;
  for (Index i = 0; i < n; ++i) {
    list.push_back({i, p.gt[i]});
    Index r = uniform_index(rng, n - 1);
    if (r >= p.gt[i]) ++r;
    list.push_back({i, r});
  }
  const EntrySet entries(n, n, std::move(list));
  const Matrix theta = Matrix::Identity(p.dim(), p.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(nll_alignment_loss(theta, p.x1, p.x2, p.gt, 10.0, entries).value);
  }
}
BENCHMARK(BM_AlignTwoEntry)->Arg(1000)->Arg(10000);

void BM_Hungarian(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng = make_rng(9);
  const Matrix cost = gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(cost).objective);
  state.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNCubed);

void BM_SphericalCode(benchmark::State& state) {
  const Index n = state.range(0);
  const int m = rank_for(n);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_spherical_code(n, m, seed++).max_coherence);
}
BENCHMARK(BM_SphericalCode)->Arg(24)->Arg(126)->Arg(240);

}  // namespace
}  // namespace permkiss

BENCHMARK_MAIN();
