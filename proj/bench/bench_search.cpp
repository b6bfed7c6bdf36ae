// Parallel search kernels against the serial refit-everything reference.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>

#include "okunfit/breakdetect.hpp"
#include "okunfit/model.hpp"

using namespace okunfit;

namespace {

struct Data {
    ts::AnnualSeries u{{}, {}};
    ts::GrowthSeries g{{}, {}};
    ts::AnnualSeries diff{{}, {}};
};

Data make(int n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gd(2.0, 2.2), e(0.0, 0.3), small(0.0, 0.01);
    std::vector<ts::YearValue> gp, up, dp;
    double u = 6.0;
    up.push_back({1950, u});
    dp.push_back({1950, 0.0});
    for (int i = 1; i < n; ++i) {
        const int y = 1950 + i;
        const double g = gd(rng);
        const double b = i <= n / 3 ? -0.4 : (i <= 2 * n / 3 ? -0.47 : -0.26);
        const double a = i <= n / 3 ? 1.1 : (i <= 2 * n / 3 ? 0.9 : -0.25);
        u += b * g + a;
        gp.push_back({y, g});
        up.push_back({y, u});
        dp.push_back({y, 0.01 * std::max(0, i - n / 3) - 0.02 * std::max(0, i - 2 * n / 3) + small(rng)});
    }
    for (auto& p : up) p.value += e(rng);
    Data d;
    d.g = ts::GrowthSeries({"B", ts::Variable::real_gdp_pc, ts::Unit::percent_per_year, "bench"}, gp);
    d.u = ts::AnnualSeries({"B", ts::Variable::unemployment_rate, ts::Unit::percent_points, "bench"}, up,
                           ts::DomainCheck::skip);
    d.diff = ts::AnnualSeries({"B", ts::Variable::inflation_rate, ts::Unit::index_difference, "bench"}, dp,
                              ts::DomainCheck::skip);
    return d;
}

void okun_search(benchmark::State& state, okun::AnchorMode mode, Backend backend) {
    const auto d = make(static_cast<int>(state.range(0)));
    okun::SearchOptions o;
    o.n_breaks = static_cast<int>(state.range(1));
    o.anchor_mode = mode;
    o.backend = backend;
    std::size_t placements = 0;
    for (auto _ : state) {
        const auto r = okun::search_breaks(d.u, d.g, o);
        placements = r.placements_evaluated;
        benchmark::DoNotOptimize(r.search_rms);
    }
    state.counters["placements"] = static_cast<double>(placements);
}

void hinge_search(benchmark::State& state, Backend backend) {
    const auto d = make(static_cast<int>(state.range(0)));
    const int k = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(breaks::best_hinge_fit(d.diff, k, 5, backend).rms);
}

}  // namespace

BENCHMARK_CAPTURE(okun_search, measured_parallel, okun::AnchorMode::measured, Backend::parallel)
    ->Args({60, 2})->Args({70, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(okun_search, measured_reference, okun::AnchorMode::measured, Backend::reference)
    ->Args({60, 2})->Args({70, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(okun_search, chained_parallel, okun::AnchorMode::chained, Backend::parallel)
    ->Args({60, 2})->Args({70, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(okun_search, chained_reference, okun::AnchorMode::chained, Backend::reference)
    ->Args({60, 2})->Args({70, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hinge_search, parallel, Backend::parallel)->Args({70, 2})->Args({70, 4})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hinge_search, reference, Backend::reference)->Args({70, 2})->Args({70, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
