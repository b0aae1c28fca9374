#include "rpme/config.hpp"
#include "rpme/dynamics.hpp"
#include "rpme/error.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace rpme;

TEST_CASE("growth fit recovers the exponent under an offset") {
    std::vector<double> t, r;
    for (int i = 1; i <= 50; ++i) {
        t.push_back(i);
        r.push_back(3.0 + 2.0 * std::pow(i, 0.5));
    }
    const auto g = fit_growth(t, r);
    CHECK(g.gamma == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(g.a == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(g.loglog_slope < 0.45);
    CHECK_THROWS_AS(fit_growth({1, 2}, {1, 2}), PreconditionError);
}

TEST_CASE("monotone outcomes") {
    check_monotone({{0.5, Verdict::Vanishing}, {1.0, Verdict::Transition}, {2.0, Verdict::Spreading}});
    CHECK_THROWS_AS(check_monotone({{0.5, Verdict::Spreading}, {1.0, Verdict::Vanishing}}), InvariantViolation);
}

TEST_CASE("speed fit on a synthetic square-root front") {
    const double y0 = 0.4;
    std::vector<FrontSample> path;
    for (int i = 1; i <= 200; ++i) {
        const double t = 0.5 * i, r = 2.0 * y0 * std::sqrt(t) + 0.2;
        path.push_back({t, -r, r, -r, r, 0.3});
    }
    const auto fit = transition_speed_fit(path, 0.0, 0.3, 2.0);
    CHECK(fit.y0_fit == doctest::Approx(y0).epsilon(1e-6));
    CHECK(fit.y0_fit_left == doctest::Approx(y0).epsilon(1e-6));
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-2));

    Outcome spreading;
    spreading.verdict = Verdict::Spreading;
    spreading.front_path = path;
    CHECK_THROWS_AS(transition_speed_fit(spreading, 0.0, 0.3, 2.0), DomainError);
}

TEST_CASE("vanishing level") {
    CHECK(vanishing_level(Reaction(ReactionSpec::combustion(2.0, 0.3))) == doctest::Approx(0.3));
    CHECK(vanishing_level(Reaction(ReactionSpec::bistable(2.0, 0.25))) == doctest::Approx(0.25));
    CHECK(vanishing_level(Reaction(ReactionSpec::monostable(2.0))) == 0.0);
    CHECK(std::isinf(vanishing_level(Reaction(ReactionSpec::pure_diffusion(2.0)))));
}

namespace {

RunConfig combustion_parabola(double dx) {
    RunConfig c;
    c.reaction = ReactionSpec::combustion(2.0, 0.3);
    c.grid.dx = dx;
    c.u0.kind = "parabola";
    c.u0.params = {{"sigma", 1.0}, {"b", 1.0}};
    c.t_end = 5.0;
    c.record_stride = 50;
    return c;
}

}  // namespace

TEST_CASE("data below the ignition level vanish") {
    const auto o = classify(combustion_parabola(1.0 / 32), 0.25);
    CHECK(o.verdict == Verdict::Vanishing);
}

TEST_CASE("large combustion data spread") {
    auto c = combustion_parabola(1.0 / 32);
    c.t_end = 20.0;
    const auto o = classify(c, 3.0);
    CHECK(o.verdict == Verdict::Spreading);
}

TEST_CASE("identical data never separate") {
    auto c = combustion_parabola(1.0 / 32);
    const auto z = z0_monitor(c, c, 0.2, 10);
    REQUIRE_FALSE(z.series.empty());
    for (const auto& s : z.series) {
        CHECK(s.z0 == 0);
        CHECK(s.tangent);
    }
    CHECK(z.increases.empty());
}

TEST_CASE("bisection rejects a bad bracket") {
    ClassifyOptions opt;
    opt.t_end = 1.0;
    CHECK_THROWS_AS(bisect_sigma(combustion_parabola(1.0 / 32), 2.0, 1.0, 1e-2, opt), PreconditionError);
}
