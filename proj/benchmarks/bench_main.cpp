#include <benchmark/benchmark.h>

#include "omegalab/arith.hpp"
#include "omegalab/poly_factor.hpp"

using namespace omegalab;

static void BM_PrimeTableBuild(benchmark::State& state) {
    for (auto _ : state) {
        PrimeTable t = PrimeTable::build(static_cast<uint64_t>(state.range(0)));
        benchmark::DoNotOptimize(t.primes().size());
    }
}
BENCHMARK(BM_PrimeTableBuild)->Arg(100000)->Arg(1000000)->Arg(10000000);

static void BM_OmegaSweep(benchmark::State& state) {
    PrimeTable t = PrimeTable::build(1000000);
    for (auto _ : state) {
        int64_t acc = 0;
        for (int64_t m = 2; m <= state.range(0); ++m) acc += omega(m, t);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_OmegaSweep)->Arg(10000)->Arg(100000);

static void BM_RootCountModP(benchmark::State& state) {
    UniPoly f = UniPoly::from(parse_polynomial("x1^4 + 4", 1));
    PrimeTable t = PrimeTable::build(static_cast<uint64_t>(state.range(0)));
    for (auto _ : state) {
        int64_t acc = 0;
        for (uint32_t p : t.primes()) acc += count_roots_mod_p(f, p);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_RootCountModP)->Arg(10000)->Arg(100000);

static void BM_FactorUnivariate(benchmark::State& state) {
    IntPolynomial f = parse_polynomial("x1^12 - 1", 1);
    for (auto _ : state) {
        FactorList fl = factor_univariate(f);
        benchmark::DoNotOptimize(fl.distinct_count());
    }
}
BENCHMARK(BM_FactorUnivariate);

BENCHMARK_MAIN();
