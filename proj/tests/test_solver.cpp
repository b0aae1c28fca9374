#include "rpme/error.hpp"
#include "rpme/exact.hpp"
#include "rpme/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace rpme;

namespace {

StepOptions fixed_grid() {
    StepOptions o;
    o.grow = false;
    return o;
}

}  // namespace

TEST_CASE("covering grid") {
    const auto g = Grid1D::covering(-1.0, 1.0, 0.25);
    CHECK(g.x_min() <= -1.0);
    CHECK(g.x_max() >= 1.0);
    CHECK(g.x(g.index_of(0.0)) == 0.0);
    CHECK(g.x(0) == -g.x(g.n - 1));
}

TEST_CASE("stable step") {
    State s = init_state(Grid1D::covering(-2, 2, 0.01), [](double x) { return std::max(0.0, 1 - x * x); });
    CHECK(stable_dt(s, 2.0, 1.0, 0.4) == doctest::Approx(0.4 * 1e-4 / 4.0));
    CHECK(stable_dt(s, 2.0, 1e6, 0.4) == doctest::Approx(0.4e-6));
    std::vector<double> scratch;
    const Reaction f(ReactionSpec::pure_diffusion(2.0));
    CHECK_THROWS_AS(step(s, f, 2.0, 1.0, 0.0, fixed_grid(), scratch), NumericError);
}

TEST_CASE("pure diffusion conserves mass and stays nonnegative") {
    const Reaction f(ReactionSpec::pure_diffusion(3.0));
    State s = init_state(Grid1D::covering(-3, 3, 1.0 / 64),
                         [](double x) { return std::pow(std::max(0.0, 1 - x * x), 2.0); });
    const double mass0 = s.mass();
    std::vector<double> scratch;
    for (int k = 0; k < 2000; ++k) step(s, f, 3.0, stable_dt(s, 3.0, 0.0, 0.4), 0.0, fixed_grid(), scratch);
    CHECK(s.mass() == doctest::Approx(mass0).epsilon(1e-9));
    CHECK(*std::min_element(s.u.begin(), s.u.end()) >= 0.0);
    CHECK(s.sup() < 1.0);
}

TEST_CASE("serial and OpenMP kernels agree exactly") {
    const Reaction f(ReactionSpec::bistable(2.0, 0.3));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> u(4096, 0.0), a(u.size()), b(u.size());
    for (std::size_t i = 1; i + 1 < u.size(); ++i) u[i] = d(rng);
    const auto sa = kernels::explicit_step_serial(u, a, 1, u.size() - 1, 0.1, 1e-3, 2.0, f);
    const auto sb = kernels::explicit_step_omp(u, b, 1, u.size() - 1, 0.1, 1e-3, 2.0, f);
    CHECK(a == b);
    CHECK(sa.max_u == sb.max_u);
    CHECK(kernels::max_abs_serial(u) == kernels::max_abs_omp(u));
}

TEST_CASE("ordered data stay ordered") {
    const double m = 2.0;
    const Reaction f(ReactionSpec::bistable(m, 0.3));
    const auto grid = Grid1D::covering(-4, 4, 1.0 / 64);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const double c = d(rng), h = 0.5 + d(rng);
        auto lo = [&](double x) { return 0.8 * h * std::max(0.0, 1 - (x - c) * (x - c)); };
        auto hi = [&](double x) { return h * std::max(0.0, 1.5 - (x - c) * (x - c)); };
        State a = init_state(grid, lo), b = init_state(grid, hi);
        const double K = f.lipschitz(2.0);
        std::vector<double> scratch;
        for (int k = 0; k < 500; ++k) {
            const double dt = std::min(stable_dt(a, m, K, 0.4), stable_dt(b, m, K, 0.4));
            step(a, f, m, dt, K, fixed_grid(), scratch);
            step(b, f, m, dt, K, fixed_grid(), scratch);
        }
        for (std::size_t i = 0; i < a.u.size(); ++i) REQUIRE(a.u[i] <= b.u[i] + 1e-15);
    }
}

TEST_CASE("ZKB run matches the source solution") {
    const double m = 2.0, C = 0.5;
    const Reaction f(ReactionSpec::pure_diffusion(m));
    State s = init_state(Grid1D::covering(-6, 6, 1.0 / 128), [&](double x) { return zkb_profile(m, C, x, 1.0); });
    s.t = 1.0;
    RunOptions o;
    o.t_end = 2.0;
    o.step.grow = false;
    run(s, f, m, o);
    double err = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
        err = std::max(err, std::abs(s.u[i] - zkb_profile(m, C, s.grid.x(i), s.t)));
    CHECK(s.t == doctest::Approx(2.0));
    CHECK(err < 1e-2);
}

TEST_CASE("energy does not increase") {
    const double m = 2.0;
    const Reaction f(ReactionSpec::bistable(m, 0.3));
    State s = init_state(Grid1D::covering(-4, 4, 1.0 / 64), [](double x) { return std::max(0.0, 1 - x * x); });
    RunOptions o;
    o.t_end = 1.0;
    o.energy = true;
    o.record_stride = 20;
    const auto h = run(s, f, m, o);
    REQUIRE(h.frames.size() > 10);
    CHECK(energy_check(h).nonincreasing);
}

TEST_CASE("intersection counts") {
    const auto grid = Grid1D::covering(-2, 2, 0.1);
    auto p = [](double x) { return std::max(0.0, 1 - x * x); };
    const State a = init_state(grid, p);
    const State b = init_state(grid, [&](double x) { return 0.5 * p(x); });
    const State c = init_state(grid, [&](double x) { return std::max(0.0, 0.6 - x * x); });
    CHECK(intersection_count(a, a).tangent);
    CHECK(intersection_count(a, a).count == 0);
    CHECK(intersection_count(a, b).count == 0);
    CHECK(intersection_count(b, c).count == 2);
    CHECK(intersection_count(b, c).common_components == 1);
}

TEST_CASE("support components") {
    const auto grid = Grid1D::covering(-3, 3, 0.1);
    const State s = init_state(grid, [](double x) { return std::max(0.0, 0.25 - (std::abs(x) - 1.5) * (std::abs(x) - 1.5)); });
    const auto comps = find_components(grid, s.u);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].left == doctest::Approx(-1.9));
    CHECK(comps[1].right == doctest::Approx(1.9));
}
