#include <benchmark/benchmark.h>

#include "qedcs/operators.hpp"

namespace {

using namespace qedcs;

const BumpField& field() {
  static const BumpField A({{FourVector(0.5, 0.3, -0.2, 0.1), Bump{FourVector::Zero(), 1.2}}});
  return A;
}

GridPtr curved_grid(int N) { return make_grid(std::make_shared<GaussianBumpSurface>(0.3, 1.0), 1.5, N); }

void BM_AssembleDeltaP(benchmark::State& state) {
  GridPtr g = curved_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_p(g, field(), 1.0));
  state.SetComplexityN(static_cast<int64_t>(g->size()));
}
BENCHMARK(BM_AssembleDeltaP)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_HsNormAssembled(benchmark::State& state) {
  const DiscretizedOperator op = delta_p(curved_grid(static_cast<int>(state.range(0))), field(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hs_norm(op));
}
BENCHMARK(BM_HsNormAssembled)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_HsNormStreamed(benchmark::State& state) {
  GridPtr g = curved_grid(static_cast<int>(state.range(0)));
  const KernelFn k = [&](std::size_t i, std::size_t j) {
    KernelPoint pt;
    pt.x = g->points[i];
    pt.y = g->points[j];
    return delta_p_kernel(field(), pt, 1.0);
  };
  for (auto _ : state) benchmark::DoNotOptimize(hs_norm_kernel(k, *g));
}
BENCHMARK(BM_HsNormStreamed)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_FlatOracle(benchmark::State& state) {
  GridPtr g = make_grid(std::make_shared<FlatSurface>(), 1.0, static_cast<int>(state.range(0)),
                        QuadratureRule::Midpoint, true);
  for (auto _ : state) benchmark::DoNotOptimize(pminus_flat_oracle(g, 1.0));
}
BENCHMARK(BM_FlatOracle)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
