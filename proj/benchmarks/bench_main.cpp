// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links
//
// Microbenchmarks for the hot paths of a sweep: channel synthesis, surrogate
// evaluation, the generic max-min solve, and one full outer iteration.

#include "risee/ao.hpp"
#include "risee/channel.hpp"
#include "risee/maxmin.hpp"
#include "risee/scenario.hpp"
#include "risee/steps.hpp"
#include "risee/surrogate.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace risee;

namespace {

Scenario bench_scenario(int N, Architecture arch) {
    Scenario s = load_scenario("{}");
    s.N = N;
    s.architecture = arch;
    return s;
}

void bm_draw_channels(benchmark::State& state) {
    const Scenario s = bench_scenario(static_cast<int>(state.range(0)), Architecture::LPD);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(draw_channels(s, trial++ % 64));
    }
}

void bm_surrogate_eval(benchmark::State& state) {
    const Scenario s = bench_scenario(static_cast<int>(state.range(0)), Architecture::LPD);
    const ChannelSet cs = draw_channels(s, 0);
    const RisState st = initial_state(s);
    const CMat w = matched_filter_init(cs, st.psi, s);
    const PsiSurrogate ps = build_psi_surrogate(cs, st.psi, w, s.sigma2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ps.eval(st.psi));
    }
}

void bm_solve_maxmin(benchmark::State& state) {
    // three bowls over a box, the shape of a small surface subproblem
    const int n = static_cast<int>(state.range(0));
    MaxMinProblem p;
    p.dim = n;
    for (int k = 0; k < 3; ++k) {
        ConcaveQuadratic q;
        q.H = -2.0 * Mat::Identity(n, n);
        q.g = Vec::Constant(n, 0.1 * (k + 1));
        q.c = 1.0 + 0.2 * k;
        p.objectives.push_back(std::move(q));
    }
    for (int i = 0; i < n; ++i) {
        ConcaveQuadratic lo, hi;
        lo.c = 1.0;
        lo.g = Vec::Zero(n);
        lo.g(i) = 1.0;
        hi.c = 1.0;
        hi.g = Vec::Zero(n);
        hi.g(i) = -1.0;
        p.constraints.push_back(std::move(lo));
        p.constraints.push_back(std::move(hi));
    }
    const Vec x0 = Vec::Zero(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_maxmin(p, x0, {}));
    }
}

void bm_beam_step(benchmark::State& state) {
    const Scenario s = bench_scenario(static_cast<int>(state.range(0)), Architecture::LPD);
    const ChannelSet cs = draw_channels(s, 0);
    const RisState st = initial_state(s);
    const CMat w0 = matched_filter_init(cs, st.psi, s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dinkelbach_beam_step(cs, st, w0, s));
    }
}

void bm_ao_iteration(benchmark::State& state) {
    Scenario s = bench_scenario(static_cast<int>(state.range(0)),
                                static_cast<Architecture>(state.range(1)));
    s.algo.ao_max_iter = 1;
    const ChannelSet cs = draw_channels(s, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ao_run(cs, s));
    }
}

BENCHMARK(bm_draw_channels)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_surrogate_eval)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_solve_maxmin)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_beam_step)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_ao_iteration)
    ->Args({20, static_cast<int>(Architecture::LPD)})
    ->Args({20, static_cast<int>(Architecture::GPBD)})
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
