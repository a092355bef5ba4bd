#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "fanbeam/calib.hpp"
#include "fanbeam/phantoms.hpp"

using namespace fanbeam;

namespace {

CalibProblem l_phantom_problem(int angles) {
    const ScannerConfig cfg = bench::scan(angles);
    const GeometryParams g = bench::scan_params();
    const ImageGrid fine = make_l_phantom(512, 500.0, LPhantomSpec{});
    Sinogram sino = forward_project(fine, ray_set(cfg, g));
    sino = add_noise(sino, {0.02, 1});
    return make_calib_problem(std::move(sino), make_l_phantom(256, 500.0, LPhantomSpec{}),
                              cfg, 500.0, {FilterKind::Hann, 1.0});
}

} // namespace

// One objective evaluation; the DE inner loop is pop_size of these per
// generation.
static void ObjectiveJ(benchmark::State& state) {
    const CalibProblem prob = l_phantom_problem(static_cast<int>(state.range(0)));
    const GeometryParams theta = bench::scan_params();
    for (auto _ : state) {
        double j = objective_J(theta, prob);
        benchmark::DoNotOptimize(j);
    }
}
BENCHMARK(ObjectiveJ)->Arg(360)->Arg(20)->Unit(benchmark::kMillisecond);

static void ObjectiveJSino(benchmark::State& state) {
    const CalibProblem prob = l_phantom_problem(static_cast<int>(state.range(0)));
    const GeometryParams theta = bench::scan_params();
    for (auto _ : state) {
        double j = objective_J_sino(theta, prob);
        benchmark::DoNotOptimize(j);
    }
}
BENCHMARK(ObjectiveJSino)->Arg(20)->Unit(benchmark::kMillisecond);

static void DeGeneration(benchmark::State& state) {
    // DE overhead alone, on a cheap analytic objective
    DeOptions opts;
    opts.pop_size = 60;
    opts.max_gen = static_cast<int>(state.range(0));
    opts.conv_tol = 0.0;
    opts.seed = 7;
    opts.bounds.assign(5, {-5.0, 5.0});
    for (auto _ : state) {
        DeReport rep = de_minimize(
            [](const std::vector<double>& x) {
                double s = 0.0;
                for (double v : x) s += v * v;
                return s;
            },
            opts);
        benchmark::DoNotOptimize(rep.best_value);
    }
    state.SetItemsProcessed(state.iterations() * opts.pop_size * opts.max_gen);
}
BENCHMARK(DeGeneration)->Arg(100)->Unit(benchmark::kMillisecond);
