#include <benchmark/benchmark.h>

#include "monocrn/monocrn.hpp"

using namespace monocrn;

namespace {

const Vec kV = Vec::Constant(4, 0.5);

void BM_DecayIntegration(benchmark::State& state) {
    const VectorField f = fields::linear(-Mat::Identity(1, 1));
    IntegratorConfig cfg;
    cfg.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(integrate(f, Vec::Ones(1), 10.0, cfg).back());
}
BENCHMARK(BM_DecayIntegration)->DenseRange(4, 12, 4);

void BM_FutileCycleIntegration(benchmark::State& state) {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const double horizon = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(integrate(sys.field(), Vec::Zero(4), horizon, {}).back());
}
BENCHMARK(BM_FutileCycleIntegration)->Arg(20)->Arg(200);

void BM_ExactRankAndKernel(benchmark::State& state) {
    const RationalMatrix g = builtin::futile_cycle().gamma_exact();
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(g));
        benchmark::DoNotOptimize(right_kernel_basis(g));
        benchmark::DoNotOptimize(left_kernel_basis(g));
    }
}
BENCHMARK(BM_ExactRankAndKernel);

void BM_SemipositiveLaws(benchmark::State& state) {
    const ReactionNetwork net = builtin::futile_cycle();
    for (auto _ : state) benchmark::DoNotOptimize(semipositive_conservation_laws(net));
}
BENCHMARK(BM_SemipositiveLaws);

void BM_OrderPreservation(benchmark::State& state) {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const OrthantOrder order = OrthantOrder::standard(kV);
    const auto pairs = draw_ordered_pairs(sys.sampling_region(), order.signs(), 100, 42);
    for (auto _ : state) benchmark::DoNotOptimize(verify_order_preservation(sys.field(), order, pairs, 20.0, {}).verdict);
}
BENCHMARK(BM_OrderPreservation)->Unit(benchmark::kMillisecond);

void BM_ProjectedEquilibrium(benchmark::State& state) {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    for (auto _ : state) benchmark::DoNotOptimize(find_projected_equilibrium(sys, Vec::Zero(4), {}).r);
}
BENCHMARK(BM_ProjectedEquilibrium)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
