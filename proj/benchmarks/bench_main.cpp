#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "nle/eikonal.hpp"
#include "nle/velocity.hpp"
#include "nle/weak_engine.hpp"

using namespace nle;

namespace {

ScalarField disc(const GridSpec& g) {
    return ScalarField::sample(g, [](const Point& x) { return std::clamp(1.0 - std::hypot(x[0], x[1]), -1.0, 1.0); });
}

void BM_Convolve2D(benchmark::State& state) {
    const double h = 6.4 / static_cast<double>(state.range(0));
    const GridSpec g = GridSpec::box(2, -3.2, 3.2, h);
    const Kernel k = Kernel::zero_mean_wavelet(0.2, 1.0, 2);
    const OccupancyField chi = psi_field(disc(g), 2 * h);
    for (auto _ : state) benchmark::DoNotOptimize(convolve(k, chi, 0.0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.node_count()));
}
BENCHMARK(BM_Convolve2D)->Arg(80)->Arg(160)->Arg(320)->Unit(benchmark::kMillisecond);

void BM_Step2D(benchmark::State& state) {
    const double h = 6.4 / static_cast<double>(state.range(0));
    const GridSpec g = GridSpec::box(2, -3.2, 3.2, h);
    const ScalarField u = disc(g);
    const ScalarField c(g, 1.0);
    const double dt = cfl_time_step(g, 1.0, kDefaultCfl);
    for (auto _ : state) benchmark::DoNotOptimize(step(u, c, dt));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.node_count()));
}
BENCHMARK(BM_Step2D)->Arg(80)->Arg(160)->Arg(320)->Unit(benchmark::kMicrosecond);

void BM_PicardMap1D(benchmark::State& state) {
    const double h = 1.0 / static_cast<double>(state.range(0));
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    NonlocalProblem p;
    p.kernel = Kernel::triangle(1.0, 1);
    p.u0 = ScalarField::sample(g, [](const Point& x) { return std::clamp(0.5 - std::abs(x[0]), -1.0, 1.0); });
    p.horizon = 0.5;
    const Trajectory start = frozen_indicator_start(p);
    for (auto _ : state) benchmark::DoNotOptimize(picard_map(start, 2 * h, p));
}
BENCHMARK(BM_PicardMap1D)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
