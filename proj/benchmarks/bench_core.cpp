#include <benchmark/benchmark.h>

#include <vector>

#include "klab/linflow.hpp"
#include "klab/symspace.hpp"
#include "klab/verify.hpp"

namespace {

const std::vector<double> kGrid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};

void BM_MatrixExpLifted(benchmark::State& state) {
  const auto a = klab::lift_generator(klab::hyperbolic_generator(0), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(klab::matrix_exp(a, 1.3));
  state.counters["dim"] = static_cast<double>(a.dim());
}
BENCHMARK(BM_MatrixExpLifted)->DenseRange(1, 7, 2);

void BM_LiftGenerator(benchmark::State& state) {
  const auto a = klab::hyperbolic_generator(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(klab::lift_generator(a, 4));
}
BENCHMARK(BM_LiftGenerator)->Arg(0)->Arg(2)->Arg(4);

void BM_VerifyTaming(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto spec = klab::build_surface(l, 0.5);
  const auto tp = klab::make_taming_pair(klab::taming_q(), klab::taming_p(l, 4.0), 2 * l - 1);
  for (auto _ : state) benchmark::DoNotOptimize(klab::verify_taming(spec, tp, kGrid));
}
BENCHMARK(BM_VerifyTaming)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Graphlike(benchmark::State& state) {
  const auto spec = klab::build_surface(2, 0.5);
  const auto tp = klab::make_taming_pair(klab::taming_q(), klab::example2_p(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(klab::graphlike_check(spec, tp, state.range(0), 1e-2));
}
BENCHMARK(BM_Graphlike)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ComputeM(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const klab::Box2 box{-0.55, 0.55, 0.25, l - 1.25};
  for (auto _ : state) benchmark::DoNotOptimize(klab::compute_M(l, box, 0.05));
}
BENCHMARK(BM_ComputeM)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
