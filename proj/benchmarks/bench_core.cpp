#include <benchmark/benchmark.h>

#include "jtrace/instances.hpp"
#include "jtrace/monotonicity.hpp"
#include "jtrace/verifiers.hpp"

using namespace jtrace;

namespace {

void BM_JointDiagonalize(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const auto t = random_abelian_tuple(std::uint64_t{1}, dim, 3, uniform_cube(3, {-1, 1}));
  for (auto _ : state) benchmark::DoNotOptimize(joint_diagonalize(t));
}
BENCHMARK(BM_JointDiagonalize)->Arg(4)->Arg(16)->Arg(64);

void BM_ApplyMultivariate(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const Cube cube = uniform_cube(2, {-1, 1});
  const auto t = random_abelian_tuple(std::uint64_t{2}, dim, 2, cube);
  const auto f = catalog("exp_sum", 2, cube);
  for (auto _ : state) benchmark::DoNotOptimize(apply_multivariate(f, t));
}
BENCHMARK(BM_ApplyMultivariate)->Arg(4)->Arg(16)->Arg(64);

void BM_SinSplitLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sin_decomposition_lp(n));
}
BENCHMARK(BM_SinSplitLp)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_ColumnJensen(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  Rng rng(3, 0);
  const Cube cube = uniform_cube(1, {-1, 1});
  const auto f = catalog("exp_sum", 1, cube);
  const auto col = random_unital_column(rng, 3, dim);
  std::vector<HermitianMatrix> xs;
  for (int k = 0; k < 3; ++k) xs.push_back(random_hermitian(rng, dim, cube[0]));
  for (auto _ : state) benchmark::DoNotOptimize(jensen_trace_matrix(f, xs, col));
}
BENCHMARK(BM_ColumnJensen)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
