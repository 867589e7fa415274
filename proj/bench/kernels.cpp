// Serial reference loop vs OpenMP kernel for the hot paths. The Exec argument
// is the benchmark's second range: 0 = Serial, 1 = Parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "aew/benchmark.hpp"
#include "aew/chain.hpp"
#include "aew/gaussian_proxy.hpp"
#include "aew/pricer.hpp"
#include "aew/weight_oracle.hpp"

using namespace aew;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

const LocalVolCev kLocalVol(100.0, 0.5, 0.4);
const LogNormalSabr kSabr(100.0, 0.3, 0.1, -0.5);

std::vector<PayoffSpec> strikes() {
    std::vector<PayoffSpec> p;
    for (int k = 50; k <= 200; k += 10) p.push_back(k < 100 ? PayoffSpec::put(k) : PayoffSpec::call(k));
    return p;
}

void BM_EulerLocalVol(benchmark::State& state) {
    const auto payoffs = strikes();
    const auto paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(em_price(kLocalVol, payoffs, 1.0, 100, paths, 1, 0, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_EulerLocalVol)->ArgsProduct({{20'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EulerSabr(benchmark::State& state) {
    const std::vector<PayoffSpec> payoffs = {PayoffSpec::call(100, UnderlyingMap::ExpOfFirstCoordinate)};
    const auto paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(em_price(kSabr, payoffs, 1.0, 100, paths, 1, 0, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_EulerSabr)->ArgsProduct({{20'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_OracleLocalVol(benchmark::State& state) {
    const auto payoffs = strikes();
    const auto paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(weight_oracle_mc(kLocalVol, 2, 1.0, 100.0, payoffs, paths, 1, 256, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OracleLocalVol)->ArgsProduct({{10'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ChainLevels(benchmark::State& state) {
    ChainOptions options;
    options.exec = exec_of(state);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(chain_price_1d(kLocalVol, PayoffSpec::call(140), {n, 1.0, 1.0}, 2, options));
}
BENCHMARK(BM_ChainLevels)->ArgsProduct({{2, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ProxySample(benchmark::State& state) {
    const ProxyLaw law = proxy_law(kSabr.field_set(), kSabr.initial_state(), 1.0, kSabr.epsilon());
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample(law, count, 1, 0, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxySample)->ArgsProduct({{200'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_SabrTwoDimStep(benchmark::State& state) {
    const double x[] = {kSabr.x0(), kSabr.sigma0()};
    const auto call = PayoffSpec::call(100, UnderlyingMap::ExpOfFirstCoordinate);
    const auto paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            q_step_sabr(kSabr, x, 1.0, call, 1, SabrStepMode::TwoDimMc, paths, 1, 0, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SabrTwoDimStep)->ArgsProduct({{200'000}, {0, 1}})->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
