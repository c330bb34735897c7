#include <benchmark/benchmark.h>

#include <random>

#include "indiff/dual.hpp"
#include "indiff/exp_mixture.hpp"
#include "indiff/indifference.hpp"
#include "indiff/oracle.hpp"
#include "indiff/primal.hpp"
#include "indiff/testkit.hpp"

using namespace indiff;

namespace {

FiniteMarket bench_market(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    testkit::MarketParams params;
    params.min_states = params.max_states = n;
    params.min_assets = params.max_assets = d;
    return testkit::random_market(rng, params);
}

void BM_PrimalMaximize(benchmark::State& state) {
    FiniteMarket m = bench_market(static_cast<int>(state.range(0)), 2, 1);
    std::mt19937_64 rng(2);
    Vector B = testkit::random_claim(rng, m.states());
    Utility u = Utility::exponential(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(maximize(m, u, B, 0.0).value);
}
BENCHMARK(BM_PrimalMaximize)->Arg(4)->Arg(6);

void BM_DualMinimize(benchmark::State& state) {
    FiniteMarket m = bench_market(static_cast<int>(state.range(0)), 2, 1);
    std::mt19937_64 rng(2);
    Vector B = testkit::random_claim(rng, m.states());
    Utility u = Utility::exponential(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(minimize_dual(m, u, B, 0.0).value);
}
BENCHMARK(BM_DualMinimize)->Arg(4)->Arg(6);

void BM_Price(benchmark::State& state) {
    FiniteMarket m = bench_market(5, 2, 3);
    std::mt19937_64 rng(4);
    Vector B = testkit::random_claim(rng, m.states());
    Utility u = Utility::exponential(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(price(m, u, B, 0.0));
}
BENCHMARK(BM_Price);

void BM_GridDualOracle(benchmark::State& state) {
    FiniteMarket m = bench_market(4, 1, 5);
    std::mt19937_64 rng(6);
    Vector B = testkit::random_claim(rng, m.states());
    Utility u = Utility::exponential(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::grid_dual(m, u, B, 0.0).min_value);
}
BENCHMARK(BM_GridDualOracle);

void BM_MixtureSingularMass(benchmark::State& state) {
    ExpMixtureMarket m(ExpMixtureMarket::default_atoms(), 1.0,
                       ExpMixtureMarket::DeltaYClaim{0.3});
    for (auto _ : state)
        benchmark::DoNotOptimize(m.singular_mass().closed_form);
}
BENCHMARK(BM_MixtureSingularMass);

}  // namespace

BENCHMARK_MAIN();
