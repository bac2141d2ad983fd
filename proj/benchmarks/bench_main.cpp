#include "newtonosc/dyadpol.hpp"
#include "newtonosc/newton.hpp"
#include "newtonosc/opnorm.hpp"
#include "newtonosc/puiseux.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace newtonosc;

namespace {

BivarPoly random_poly(std::mt19937_64& rng, int terms, int max_deg) {
    std::uniform_int_distribution<int> e(0, max_deg), c(-9, 9);
    BivarPoly p;
    while (p.size() < static_cast<std::size_t>(terms)) {
        const int v = c(rng);
        if (v != 0) p.add_term(e(rng), e(rng), v);
    }
    return p;
}

void BM_BuildPolygon(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const BivarPoly f = random_poly(rng, static_cast<int>(state.range(0)), 24);
    for (auto _ : state) benchmark::DoNotOptimize(build_polygon(f));
}
BENCHMARK(BM_BuildPolygon)->Arg(8)->Arg(64)->Arg(256);

void BM_ExpandBranches(benchmark::State& state) {
    const BivarPoly f = parse_poly("(y-x)^2 - x^5 + x^3*y^3");
    const Rational order = default_truncation_order(f);
    for (auto _ : state) benchmark::DoNotOptimize(expand_branches(f, order));
}
BENCHMARK(BM_ExpandBranches);

void BM_KernelFill(benchmark::State& state) {
    const PhaseSpec p{parse_poly("x*y - x^3*y/3"), 1.0};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(discretize(p, 16.0, GridSpec{n, Rect::square(1.0)}).rows());
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_KernelFill)->Arg(256)->Arg(1024);

void BM_ApplyNormal(benchmark::State& state) {
    const PhaseSpec p{parse_poly("x*y"), 1.0};
    const int n = static_cast<int>(state.range(0));
    const DiscreteOperator op = discretize(p, 16.0, GridSpec{n, Rect::square(1.0)});
    cvec v(static_cast<std::size_t>(n), {1.0, 0.0}), w, u;
    for (auto _ : state) {
        op.apply(v, w);
        op.apply_adjoint(w, u);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() * 2 * n * n);
}
BENCHMARK(BM_ApplyNormal)->Arg(512)->Arg(2048);

void BM_EstimateNorm(benchmark::State& state) {
    const PhaseSpec p{parse_poly("x*y"), 1.0};
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_norm(p, lambda).value);
}
BENCHMARK(BM_EstimateNorm)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LowerBoundTrials(benchmark::State& state) {
    const ExponentProfile prof{{3, 0, 7, 12}, 2.0};
    const LowerBoundSet e = lower_bound_set(prof);
    for (auto _ : state) benchmark::DoNotOptimize(verify_lower_bound(prof, e, 100, 8, 5).min_observed);
}
BENCHMARK(BM_LowerBoundTrials)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
