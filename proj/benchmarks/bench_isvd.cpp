// SPDX-License-Identifier: Apache-2.0
#include "isvd/datagen.hpp"
#include "isvd/driver.hpp"
#include "isvd/properties.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace isvd;

// Rank-30 stream of m = 2000 rows; state.range(0) columns.
void BM_LowRankStream(benchmark::State& state, Algorithm algorithm) {
  Rng rng(1);
  const Matrix u = random_low_rank(rng, 2000, state.range(0), 30);
  const WeightOperator w = WeightOperator::identity(u.rows());
  RunOptions opts;
  opts.sample_every = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(algorithm, matrix_columns(u), w, ToleranceConfig{}, opts));
  }
  state.SetComplexityN(state.range(0));
}

// Nodal snapshots on an N x N mesh with the mass-matrix weight.
void BM_MeshMassWeight(benchmark::State& state, Algorithm algorithm) {
  const StructuredMesh mesh = build_mesh(state.range(0));
  const SparseMatrix mass = assemble_mass_matrix(mesh);
  SnapshotConfig cfg;
  cfg.kind = SnapshotKind::nodal_u;
  const Matrix u = snapshot_matrix(mesh, mass, cfg);
  const WeightOperator w = WeightOperator::sparse(mass);
  RunOptions opts;
  opts.sample_every = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(algorithm, matrix_columns(u), w, ToleranceConfig{}, opts));
  }
}

BENCHMARK_CAPTURE(BM_LowRankStream, isvd3, Algorithm::isvd3)->RangeMultiplier(2)->Range(250, 4000)->Complexity();
BENCHMARK_CAPTURE(BM_LowRankStream, isvd4, Algorithm::isvd4)->RangeMultiplier(2)->Range(250, 4000)->Complexity();
BENCHMARK_CAPTURE(BM_LowRankStream, isvd1, Algorithm::isvd1)->RangeMultiplier(2)->Range(250, 4000)->Complexity();
BENCHMARK_CAPTURE(BM_MeshMassWeight, isvd3, Algorithm::isvd3)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MeshMassWeight, isvd1, Algorithm::isvd1)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
