#include <benchmark/benchmark.h>

#include "qedcs/bessel.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/oracle.hpp"

namespace {

using namespace qedcs;

const CFourVector kW(cd(0.2, -0.3), cd(0.7, 0.0), cd(-0.4, 0.0), cd(0.5, 0.0));

void BM_BesselK1(benchmark::State& state) {
  const cd xi(1.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(k1(xi));
}
BENCHMARK(BM_BesselK1);

void BM_DEval(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(d_eval(kW, 1.0));
}
BENCHMARK(BM_DEval);

void BM_PMinus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(p_minus(kW, 1.0));
}
BENCHMARK(BM_PMinus);

void BM_DeltaPKernel(benchmark::State& state) {
  const BumpField A({{FourVector(0.5, 0.3, -0.2, 0.1), Bump{FourVector::Zero(), 1.2}}});
  KernelPoint pt;
  pt.x = FourVector(0.0, 0.1, 0.2, -0.1);
  pt.y = FourVector(0.05, 0.6, -0.2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(delta_p_kernel(A, pt, 1.0));
}
BENCHMARK(BM_DeltaPKernel);

void BM_MassShellQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(oracle::d_quadrature(kW, {}));
}
BENCHMARK(BM_MassShellQuadrature)->Unit(benchmark::kMillisecond);

}  // namespace
