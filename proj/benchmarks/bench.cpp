// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include <benchmark/benchmark.h>

#include "qdissect/circuit.hpp"
#include "qdissect/dissect.hpp"
#include "qdissect/generators.hpp"
#include "qdissect/qubo.hpp"
#include "qdissect/random.hpp"
#include "qdissect/refine.hpp"
#include "qdissect/varqite.hpp"

namespace qdissect {
namespace {

void BM_ApplyRzyReal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Ansatz ans;
  ans.n_qubits = n;
  auto amps = prepare_real(ans, {});
  for (auto _ : state) {
    apply_rzy(amps, 0, static_cast<int>(n - 1), 0.3);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}
BENCHMARK(BM_ApplyRzyReal)->DenseRange(10, 22, 4);

void BM_ApplyRzyComplex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto sv = initial_state(n);
  for (auto _ : state) {
    apply_rzy(sv, 0, static_cast<int>(n - 1), 0.3);
    benchmark::DoNotOptimize(sv.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sv.dimension()));
}
BENCHMARK(BM_ApplyRzyComplex)->DenseRange(10, 22, 4);

void BM_AssembleG(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = grid_graph(k, k);
  const auto ans = build_full_ansatz(g);
  const auto h = to_hamiltonian(build_qubo(g, default_lambda(g)));
  const std::vector<double> theta(ans.num_params(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_G(ans, theta, h, 0, 0));
  state.counters["params"] = static_cast<double>(ans.num_params());
}
BENCHMARK(BM_AssembleG)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SymbolicFactorize(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = grid_graph(k, k);
  const auto pattern = SparsePattern::from_graph(g);
  const auto perm = Permutation::from_order(minimum_degree_order(g));
  for (auto _ : state) benchmark::DoNotOptimize(symbolic_factorize(pattern, perm));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pattern.nnz()));
}
BENCHMARK(BM_SymbolicFactorize)->Arg(16)->Arg(64)->Arg(128);

void BM_FmRefine(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = grid_graph(k, k);
  Rng rng(1);
  const auto init = make_partition(g, random_equal_cardinality(g.num_vertices(), rng));
  const FmConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(fm_refine(g, init, cfg));
}
BENCHMARK(BM_FmRefine)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace qdissect

BENCHMARK_MAIN();
