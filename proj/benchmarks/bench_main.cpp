#include "msbsde/analysis.hpp"
#include "msbsde/problems.hpp"
#include "msbsde/quadrature.hpp"
#include "msbsde/solver.hpp"
#include "msbsde/stencil.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace msbsde;

static void BM_StencilWeights(benchmark::State& state) {
    const auto params = StencilParams::quadratic(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Stencil s(params);
        benchmark::DoNotOptimize(s.gamma().data());
    }
}
BENCHMARK(BM_StencilWeights)->DenseRange(2, 7);

static void BM_Diagnose(benchmark::State& state) {
    const Stencil s(StencilParams::equidistant(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        auto d = diagnose(s);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Diagnose)->DenseRange(2, 7);

static void BM_HermiteRule(benchmark::State& state) {
    for (auto _ : state) {
        HermiteRule rule(static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(rule);
    }
}
BENCHMARK(BM_HermiteRule)->Arg(4)->Arg(16)->Arg(64);

static void BM_Expect(benchmark::State& state) {
    const HermiteRule rule(static_cast<int>(state.range(0)));
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expect(rule, [](double w) { return std::exp(w); }, x, 0.01));
    }
}
BENCHMARK(BM_Expect)->Arg(4)->Arg(16);

static void BM_SolveP3(benchmark::State& state) {
    const auto problem = find_problem("P3");
    SolverConfig cfg{.stencil = Stencil(StencilParams({1, 2}))};
    cfg.steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto surface = solve_backward(problem, cfg);
        benchmark::DoNotOptimize(surface.levels.data());
    }
}
BENCHMARK(BM_SolveP3)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
