#include "rpme/error.hpp"
#include "rpme/stationary.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>

using namespace rpme;

namespace {

// Half-width of the orbit through U = q0 with p = 0: along the orbit
// p^2 = 2m (I(q0) - I(q)), and dx = m q^(m-1) dq / |p|.
double half_width_oracle(const Reaction& f, double m, double q0, double level_C) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(
        [&](double q) {
            const double rad = level_C - 2.0 * m * f.weighted_primitive(q);
            return rad > 0.0 ? m * std::pow(q, m - 1.0) / std::sqrt(rad) : 0.0;
        },
        0.0, q0);
}

}  // namespace

TEST_CASE("compact bump half-width against tanh-sinh quadrature") {
    const double m = 2.0;
    const Reaction f(ReactionSpec::monostable(m));
    for (double q0 : {0.01, 0.1, 0.5}) {
        const double C = 2.0 * m * f.weighted_primitive(q0);
        CHECK(bump_half_width(f, m, q0) == doctest::Approx(half_width_oracle(f, m, q0, C)).epsilon(1e-6));
        const auto b = compact_bump(f, m, q0);
        CHECK(b.eval(0.0) == doctest::Approx(q0));
        CHECK(b.compact());
    }
}

TEST_CASE("ground-state half-width against quadrature") {
    const double m = 2.0;
    const Reaction f(ReactionSpec::bistable(m, 0.25));
    const double theta1 = *special_levels(f, m).theta1;
    const double L = ground_state_half_width(f, m);
    CHECK(L == doctest::Approx(half_width_oracle(f, m, theta1, 0.0)).epsilon(1e-5));
    const auto g = ground_state(f, m);
    CHECK(g.compact());
    CHECK(g.eval(0.0) == doctest::Approx(theta1).epsilon(1e-6));
    CHECK(g.is_cauchy_stationary());
}

TEST_CASE("decay exponent and Type I ground states") {
    const Reaction f(ReactionSpec::bistable_decay(3.0, 0.25, 1.5, 0.25));
    const auto g = ground_state(f, 3.0);
    CHECK(density_edge_exponent(g) == doctest::Approx(2.0 / 1.5).epsilon(0.05));
    const Reaction h(ReactionSpec::bistable_decay(2.0, 0.25, 2.0, 0.25));
    CHECK(std::isinf(ground_state_half_width(h, 2.0)));
}

TEST_CASE("bump width grows with height") {
    const Reaction f(ReactionSpec::monostable(2.0));
    const auto curve = width_height_curve(f, 2.0, {0.05, 0.1, 0.2, 0.4, 0.8});
    CHECK(curve.strictly_increasing);
}

TEST_CASE("multibump assembly") {
    const Reaction f(ReactionSpec::bistable(2.0, 0.25));
    const auto g = ground_state(f, 2.0);
    const double L = *g.L;
    const auto two = assemble_multibump(g, {-L - 0.5, L + 0.5});
    CHECK(two.eval(-L - 0.5) == doctest::Approx(g.eval(0.0)));
    CHECK(two.eval(0.0) == 0.0);
    CHECK_THROWS_AS(assemble_multibump(g, {0.0, L}), PreconditionError);
}
