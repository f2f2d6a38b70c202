#include <benchmark/benchmark.h>

#include "estent/cover.hpp"
#include "estent/estimator.hpp"
#include "estent/random.hpp"
#include "estent/systems.hpp"

using namespace estent;

static void BM_IntegrateLinear2d(benchmark::State& state) {
    const auto model = make_benchmark("linear-2d").model;
    Rng rng(1, 0);
    const auto d = random_disturbance(rng, model.disturbance_set(), 0.01, 1.0);
    const Vec x0 = Vec::Constant(2, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(model, x0, d, 1.0, 1e-3));
    }
}
BENCHMARK(BM_IntegrateLinear2d);

static void BM_NearestIndex(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Box box = Box::from_bounds(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
    const Cover cover = grid_cover(box, n > 3 ? 0.02 : 1e-3);
    Rng rng(2, 0);
    std::vector<Vec> xs;
    for (int i = 0; i < 1024; ++i) xs.push_back(rng.point_in(box));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nearest_index(cover, xs[i++ & 1023]));
    }
}
BENCHMARK(BM_NearestIndex)->Arg(1)->Arg(3)->Arg(6);

static void BM_CoveringNumber(benchmark::State& state) {
    const Box box = Box::from_bounds(Vec::Constant(4, 0.0), Vec::Constant(4, 1.0));
    double delta = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(covering_number(box, delta));
        delta = delta < 0.4 ? delta * 1.01 : 1e-3;
    }
}
BENCHMARK(BM_CoveringNumber);

static void BM_EstimatorFrame(benchmark::State& state) {
    const auto model = make_benchmark("linear-2d").model;
    auto config = make_estimator_config(0.9, 0.2, 1.0, -1.0, model.initial_set());
    config.m_constant = 0.0;
    const auto first = encoder_init(model, config, Vec::Constant(2, 0.3));
    for (auto _ : state) {
        const auto enc = encoder_step(model, first.state, config, Vec::Constant(2, 0.1));
        benchmark::DoNotOptimize(
            decoder_step(model, first.state, config, enc.record.k, enc.record.index));
    }
}
BENCHMARK(BM_EstimatorFrame);

BENCHMARK_MAIN();
