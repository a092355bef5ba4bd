#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "fanbeam/fbp.hpp"

using namespace fanbeam;

static void FilterSinogram(benchmark::State& state) {
    const ScannerConfig cfg = bench::scan(360);
    const RaySet rays = ray_set(cfg, bench::scan_params());
    const Sinogram sino = forward_project(make_log_phantom(256, 500.0), rays);
    for (auto _ : state) {
        Sinogram q = filter_sinogram(sino, {FilterKind::Hann, 1.0}, cfg.det_pixel);
        benchmark::DoNotOptimize(q.values.data());
    }
    state.SetItemsProcessed(state.iterations() * sino.k);
}
BENCHMARK(FilterSinogram)->Unit(benchmark::kMillisecond);

static void FbpReconstruct(benchmark::State& state) {
    const int angles = static_cast<int>(state.range(0));
    const ScannerConfig cfg = bench::scan(angles);
    const GeometryParams g = bench::scan_params();
    const Sinogram sino = forward_project(make_log_phantom(512, 500.0), ray_set(cfg, g));
    for (auto _ : state) {
        ImageGrid img = fbp_reconstruct(sino, cfg, g, 256, 500.0);
        benchmark::DoNotOptimize(img.values.data());
    }
}
BENCHMARK(FbpReconstruct)->Arg(360)->Arg(20)->Unit(benchmark::kMillisecond);
