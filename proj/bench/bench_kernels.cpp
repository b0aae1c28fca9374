// Serial reference vs OpenMP kernels of the explicit step and the sup norm.

#include "rpme/reactions.hpp"
#include "rpme/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

std::vector<double> bump(std::size_t n) {
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = 2.0 * double(i) / double(n - 1) - 1.0;
        u[i] = std::max(0.0, 0.8 * (1.0 - 4.0 * x * x));
    }
    return u;
}

template <bool Parallel>
void BM_ExplicitStep(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const rpme::Reaction f(rpme::ReactionSpec::monostable(2.0));
    const auto u = bump(n);
    std::vector<double> out(n);
    const double dx = 1.0 / double(n), dt = 0.1 * dx * dx;
    for (auto _ : state) {
        auto s = Parallel ? rpme::kernels::explicit_step_omp(u, out, 1, n - 1, dt / (dx * dx), dt, 2.0, f)
                          : rpme::kernels::explicit_step_serial(u, out, 1, n - 1, dt / (dx * dx), dt, 2.0, f);
        benchmark::DoNotOptimize(s);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}

template <bool Parallel>
void BM_MaxAbs(benchmark::State& state) {
    const auto u = bump(std::size_t(state.range(0)));
    for (auto _ : state) {
        double m = Parallel ? rpme::kernels::max_abs_omp(u) : rpme::kernels::max_abs_serial(u);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ExplicitStep<false>)->Name("explicit_step/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_ExplicitStep<true>)->Name("explicit_step/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_MaxAbs<false>)->Name("max_abs/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_MaxAbs<true>)->Name("max_abs/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);

BENCHMARK_MAIN();
