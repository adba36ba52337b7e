// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <numbers>

#include "winlayer/layer_solver.hpp"
#include "winlayer/special_functions.hpp"
#include "winlayer/window_eigs.hpp"

using namespace winlayer;

static void BM_BesselZeroTable(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(special::bessel_zero_table(m, special::ZeroKind::kJ, 20));
}
BENCHMARK(BM_BesselZeroTable)->Arg(0)->Arg(10)->Arg(40);

static void BM_FemDisk(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Mesh2D mesh = mesh_window(WindowShape::disk(1.0), h);
  for (auto _ : state) benchmark::DoNotOptimize(fem_eigenpairs(mesh, BoundaryCondition::kDirichlet, 6));
  state.counters["vertices"] = static_cast<double>(mesh.vertices.size());
}
BENCHMARK(BM_FemDisk)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static AxisymConfig bench_config(double h) {
  AxisymConfig c;
  c.layers = LayerPair(std::numbers::pi);
  c.R = 2.0;
  c.L = 40.0;
  c.grid.h_rho = c.grid.h_z = h;
  return c;
}

static void BM_Assemble(benchmark::State& state) {
  const AxisymConfig c = bench_config(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(c));
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_LowestEigs(benchmark::State& state) {
  const SparseSymOp op = assemble(bench_config(1.0 / static_cast<double>(state.range(0))));
  const double thr = discrete_threshold(*op.grid);
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigs(op, thr - 1e-12, 16));
  state.counters["unknowns"] = op.dimension();
}
BENCHMARK(BM_LowestEigs)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_SolveSector(benchmark::State& state) {
  Numerics nu;
  for (auto _ : state) benchmark::DoNotOptimize(solve_sector(LayerPair(std::numbers::pi), 3.0, 0, nu));
}
BENCHMARK(BM_SolveSector)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
