// Copyright 2026 The opkrylov Authors
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

#include "opkrylov/dynamics.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace {

using namespace opkrylov;

SuperOperator open_tfim(int n) {
  return build_lindbladian(build_tfim_hamiltonian(n, -1.05, 0.5),
                           build_tfim_jump_operators(n, 0.01, 0.01));
}

SuperVector middle_seed(int n) {
  SuperVector v = vectorize(build_pauli_operator(PauliString::single(n, (n + 1) / 2, PauliAxis::Z)));
  return v / v.norm();
}

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpinOperator h = build_tfim_hamiltonian(n, -1.05, 0.5);
  const auto jumps = build_tfim_jump_operators(n, 0.01, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(build_lindbladian(h, jumps));
}
BENCHMARK(BM_Assemble)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Matvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SuperOperator lo = open_tfim(n);
  const SuperVector x = middle_seed(n);
  SuperVector y(x.size());
  for (auto _ : state) {
    lo.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * lo.nonzeros());
}
BENCHMARK(BM_Matvec)->Arg(4)->Arg(6)->Arg(7);

void BM_AdjointMatvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SuperOperator lo = open_tfim(n);
  const SuperVector x = middle_seed(n);
  SuperVector y(x.size());
  for (auto _ : state) {
    lo.apply_adjoint(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_AdjointMatvec)->Arg(6);

// Cost of the first `steps` bi-Lanczos steps at N = 6; reorthogonalization dominates.
void BM_BiLanczos(benchmark::State& state) {
  const SuperOperator lo = open_tfim(6);
  const SuperVector seed = middle_seed(6);
  IterationOptions opt;
  opt.max_steps = state.range(0);
  opt.reorth = state.range(1) != 0 ? Reorthogonalization::Full : Reorthogonalization::None;
  for (auto _ : state) benchmark::DoNotOptimize(bilanczos(lo, seed, opt));
}
BENCHMARK(BM_BiLanczos)
    ->Args({100, 1})
    ->Args({400, 1})
    ->Args({400, 0})
    ->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  EffectiveTridiagonal eff;
  for (std::size_t n = 0; n < k; ++n) eff.abs_a.push_back(0.002 * static_cast<double>(n));
  for (std::size_t n = 1; n < k; ++n) eff.abs_b.push_back(2.0 + 0.001 * static_cast<double>(n));
  eff.signed_b = eff.abs_b;
  const auto grid = default_time_grid(2000, 500.0, 1.0, 100);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(eff, grid));
}
BENCHMARK(BM_Evolve)->Arg(200)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
