#include <benchmark/benchmark.h>

#include "regime/harness.hpp"

namespace {

using namespace regime;

// Summary of a plain GBM series with a small Markov grid.
struct Fixture {
    EmpiricalSummary summary;
    TStat t_star;
    HypothesisSpec spec;

    Fixture() {
        const double delta = 5.0 / (250.0 * 360.0);
        const std::size_t n = 4000;
        const auto path = simulate_gbm({0.0, 0.15, false}, n, delta, 100.0, {7, 0, 0});
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = path.prices[i + 1] / path.prices[i] - 1.0;
        const auto ret = make_return_series(std::move(r), delta);
        const auto jumps = estimate_jump_params(ret, 2e-4);
        const auto vol = moving_stats(strip_jumps(ret, jumps.c_hat), 20, delta);
        summary = summarize(vol, jumps, 0.15, n);
        t_star = observed_tstar(ret, jumps, 20, 0.15, Side::plus);
        spec.family = Family::markov;
        spec.side = Side::plus;
        spec.replicates = 32;
        spec.holding_grid = {1, 2, 3, 4};
        spec.percent_grid = {5, 10, 15};
        spec.master_seed = 11;
        spec.keep_samples = false;
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void BM_RunTestSerial(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(run_test_serial(f.summary, f.t_star, f.spec));
}
BENCHMARK(BM_RunTestSerial)->Unit(benchmark::kMillisecond);

void BM_RunTestParallel(benchmark::State& state) {
    const auto& f = fixture();
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_test(f.summary, f.t_star, f.spec, workers));
}
BENCHMARK(BM_RunTestParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
