#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "fanbeam/phantoms.hpp"
#include "fanbeam/projector.hpp"

using namespace fanbeam;

static void ForwardProject(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ImageGrid img = make_log_phantom(n, 500.0);
    const RaySet rays = ray_set(bench::scan(90), bench::scan_params());
    for (auto _ : state) {
        Sinogram s = forward_project(img, rays);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(state.iterations() * rays.n_angles() * rays.n_det);
}
BENCHMARK(ForwardProject)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void AdjointProject(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ScannerConfig cfg = bench::scan(90);
    const RaySet rays = ray_set(cfg, bench::scan_params());
    const Sinogram sino = forward_project(make_log_phantom(n, 500.0), rays);
    for (auto _ : state) {
        ImageGrid img = adjoint_project(sino, rays, n, 500.0);
        benchmark::DoNotOptimize(img.values.data());
    }
    state.SetItemsProcessed(state.iterations() * rays.n_angles() * rays.n_det);
}
BENCHMARK(AdjointProject)->Arg(256)->Unit(benchmark::kMillisecond);

static void LineIntegral(benchmark::State& state) {
    const ImageGrid img = make_log_phantom(512, 500.0);
    for (auto _ : state) {
        double v = line_integral(img, {-900.0, 130.0}, {760.0, -210.0});
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(LineIntegral);

BENCHMARK_MAIN();
