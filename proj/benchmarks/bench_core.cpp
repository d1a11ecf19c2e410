#include <benchmark/benchmark.h>

#include "hkg/lifting.hpp"

using namespace hkg;

static void BM_Decompose(benchmark::State& state) {
    const Int h = state.range(0);
    const GroupSpec spec = make_group_spec(5, h, 2);
    const auto lower = family_jumps(5, h, 9);
    for (auto _ : state) {
        auto ms = decompose(spec, lower);
        benchmark::DoNotOptimize(ms);
    }
}
BENCHMARK(BM_Decompose)->Arg(2)->Arg(3)->Arg(4);

static void BM_DihedralDecide(benchmark::State& state) {
    const GroupSpec spec = make_group_spec(5, 3, 2);
    const auto lower = family_jumps(5, 3, 9);
    const auto ms = decompose(spec, lower);
    for (auto _ : state) {
        auto rep = dihedral_decide(ms, spec.q);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_DihedralDecide);

static void BM_GeneralDecide(benchmark::State& state) {
    const GroupSpec spec = make_group_spec(5, 3, 4, 57);
    const auto lower = family_jumps(5, 3, 1);
    const auto ms = decompose(spec, lower);
    const LiftParams params = lift_params(spec);
    for (auto _ : state) {
        auto rep = general_decide(ms, params);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_GeneralDecide);

static void BM_PiProfile(benchmark::State& state) {
    const Int h = state.range(0);
    const auto lower = family_jumps(7, h, 1);
    for (auto _ : state) {
        auto prof = pi_profile(lower, 7);
        benchmark::DoNotOptimize(prof);
    }
}
BENCHMARK(BM_PiProfile)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
