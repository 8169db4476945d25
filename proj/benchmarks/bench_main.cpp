#include <benchmark/benchmark.h>

#include "eiscong/congruence.hpp"
#include "eiscong/specialvalues.hpp"

using namespace eiscong;

namespace {
OIdeal ideal_of_int(const QuadField& f, long n) { return OIdeal::principal(f, f.from_rational(n)); }
}

static void BM_ShintaniConeZeta(benchmark::State& state) {
    const QuadField& f = QuadField::make(2);
    FieldElement w1 = f.from_rational(5);
    FieldElement w2 = f.tp_unit() * f.from_rational(5);
    long k = state.range(0);
    for (auto _ : state) {
        Rat v = shintani_cone_zeta(w1, w2, make_rat(2, 5), make_rat(3, 5), k);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ShintaniConeZeta)->Arg(2)->Arg(4);

static void BM_RayClassGroup(benchmark::State& state) {
    const QuadField& f = QuadField::make(2);
    OIdeal m = ideal_of_int(f, state.range(0));
    for (auto _ : state) {
        auto g = RayClassGroup::make(f, m);
        benchmark::DoNotOptimize(g->order());
    }
}
BENCHMARK(BM_RayClassGroup)->Arg(7)->Arg(11)->Arg(13);

static void BM_GaussSum(benchmark::State& state) {
    const QuadField& f = QuadField::make(2);
    auto chars = primitive_characters(f, ideal_of_int(f, state.range(0)));
    size_t i = 0;
    for (auto _ : state) {
        CycloNumber tau = gauss_sum(chars[i % chars.size()]);
        benchmark::DoNotOptimize(tau);
        ++i;
    }
}
BENCHMARK(BM_GaussSum)->Arg(5)->Arg(7);

static void BM_EisCoefficients(benchmark::State& state) {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    auto ideals = f.ideals_up_to(Int(state.range(0)));
    for (auto _ : state) {
        EisensteinSeries e(chi5, RayCharacter::trivial(f), 2);
        CycloNumber acc = CycloNumber::zero();
        for (auto& m : ideals) acc += e.coefficient(m);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_EisCoefficients)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_LValueNumericContinued(benchmark::State& state) {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    for (auto _ : state) {
        auto v = l_value_numeric_continued(chi5, -1.0, 10000);
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_LValueNumericContinued)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
