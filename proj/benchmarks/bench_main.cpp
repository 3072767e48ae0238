#include <benchmark/benchmark.h>

#include <bvq/gallery.hpp>
#include <bvq/jumps.hpp>
#include <bvq/lusin.hpp>
#include <bvq/quadrature.hpp>

#include <vector>

using namespace bvq;

namespace {

Domain square(int dim, int cells) {
    const std::vector<double> lo(static_cast<std::size_t>(dim), -0.5), hi(static_cast<std::size_t>(dim), 0.5);
    const std::vector<int> c(static_cast<std::size_t>(dim), cells);
    return make_domain(dim, lo, hi, c);
}

void BM_PairIntegral2D(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const auto u = gallery("disk", square(2, cells)).field;
    const double eps = 12.0 / cells;
    for (auto _ : state) benchmark::DoNotOptimize(pair_integral(u, eps, 2.0));
    state.SetItemsProcessed(state.iterations() * cells * cells);
}
BENCHMARK(BM_PairIntegral2D)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PairIntegral3D(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const auto u = gallery("stepNd", square(3, cells)).field;
    for (auto _ : state) benchmark::DoNotOptimize(pair_integral(u, 8.0 / cells, 1.0));
}
BENCHMARK(BM_PairIntegral3D)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_DetectJumps(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const auto u = gallery("disk", square(2, cells)).field;
    for (auto _ : state) benchmark::DoNotOptimize(detect_jumps(u, 4.0 / cells).measure());
}
BENCHMARK(BM_DetectJumps)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_HolderExtend(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const auto d = square(1, cells);
    const auto u = gallery("step1d", d).field;
    const auto B = mask_from_box(d, d.cells_within({0.05, 0, 0}, {0.4, 0, 0}));
    const auto H = holder_constant_on(u, B, 0.5).combined + 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(holder_extend(u, B, 0.5, H).global_bound);
}
BENCHMARK(BM_HolderExtend)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
