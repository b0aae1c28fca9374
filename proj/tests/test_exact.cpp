#include "rpme/error.hpp"
#include "rpme/exact.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <doctest.h>

#include <array>
#include <cmath>

using namespace rpme;

TEST_CASE("ZKB conserves mass and solves the equation") {
    using boost::math::quadrature::gauss_kronrod;
    for (double m : {1.5, 2.0, 3.0}) {
        const double C = 0.5;
        auto mass = [&](double s) {
            const double e = zkb_edge(m, C, s);
            return gauss_kronrod<double, 61>::integrate([&](double x) { return zkb_profile(m, C, x, s); }, -e, e);
        };
        CHECK(mass(4.0) == doctest::Approx(mass(1.0)).epsilon(1e-8));
        CHECK(zkb_profile(m, C, zkb_edge(m, C, 2.0) * 1.0001, 2.0) == 0.0);
        // u_s = (u^m)_xx at an interior point, by differences.
        const double x = 0.3, s = 1.7, h = 1e-4;
        auto phi = [&](double y) { return std::pow(zkb_profile(m, C, y, s), m); };
        const double ut = (zkb_profile(m, C, x, s + h) - zkb_profile(m, C, x, s - h)) / (2 * h);
        const double lap = (phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h);
        CHECK(ut == doctest::Approx(lap).epsilon(1e-5));
    }
    CHECK_THROWS_AS(zkb_profile(2.0, 0.5, 0.0, 0.0), DomainError);
}

TEST_CASE("barrier residual certificates") {
    CHECK(certify_residual(zkb_barrier(2.0, 0.1)).passed);
    CHECK(certify_residual(supersolution_envelope(2.0, 1.0, 1.0, 1.0)).passed);
    CHECK(certify_residual(zkb_like_subsolution(3.0, 1.0, 0.1, 0.0)).passed);
    CHECK(certify_residual(sine_subsolution(1.0, 0.2, 2.0, 1.0)).passed);
    CHECK(certify_residual(parabolic_supersolution(2.0, 1.0, 13.5)).passed);
    CHECK(certify_residual(parabolic_subsolution(2.0, 1.0, 6.75, 0.2)).passed);
    CHECK(certify_residual(zkb_barrier(2.0, 0.1), 5, 5, 1e-6, 42u).passed);
}

TEST_CASE("a wrong source breaks the certificate") {
    // The supersolution envelope absorbs K u; with a larger source it is no
    // longer a supersolution.
    const auto b = supersolution_envelope(2.0, 1.0, 1.0, 1.0);
    const std::function<double(double)> bigger = [](double u) { return 10.0 * u; };
    CHECK_FALSE(certify_residual(b, 10, 10, 1e-6, std::nullopt, &bigger).passed);
}

TEST_CASE("waiting-time bracket") {
    const double m = 2.0, K = 1.0;
    const double A2min = waiting_time_a2_lower_bound(m, K);
    const auto br = waiting_time_bracket(m, K, 4 * A2min, 2 * A2min, 0.2);
    CHECK(br.T1 > 0.0);
    CHECK(br.T1 < br.T2);
    CHECK(br.sigma == doctest::Approx(std::pow(2.0 / 3.0, 3.0)));
    CHECK_THROWS_AS(waiting_time_bracket(m, K, 4 * A2min, 0.5 * A2min, 0.2), PreconditionError);
    CHECK_THROWS_AS(waiting_time_bracket(m, K, A2min * 1.5, 2 * A2min, 0.2), PreconditionError);
}

TEST_CASE("self-similar profile against an independent integration") {
    const double m = 2.0, theta = 0.3;
    const auto p = selfsimilar_shoot(m, theta, 1e-10);
    CHECK(p.darcy_holds);
    CHECK(p.y0 > 0.0);
    CHECK(p.xi.front() == doctest::Approx(std::pow(theta, m)));
    CHECK(p.V.back() == doctest::Approx(0.0));
    CHECK(p.V_prime_at_y0 == doctest::Approx(-2.0 * p.y0).epsilon(1e-3));

    // xi'' = -(2y/m) xi^((1-m)/m) xi'
    using S = std::array<double, 2>;
    auto rhs = [m](const S& s, S& d, double y) {
        d[0] = s[1];
        d[1] = -(2.0 * y / m) * std::pow(s[0], (1.0 - m) / m) * s[1];
    };
    namespace odeint = boost::numeric::odeint;
    const std::size_t k = p.y.size() / 2;
    S s{std::pow(theta, m), p.slope0 * std::pow(theta, (m + 1.0) / 2.0)};
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<S>>(1e-12, 1e-12), rhs, s, 0.0,
                               p.y[k], 1e-4);
    CHECK(s[0] == doctest::Approx(p.xi[k]).epsilon(1e-6));
}

TEST_CASE("vanishing barrier constants") {
    auto spec = ReactionSpec::bistable(2.0, 0.45);
    spec.p0 = 4.0;
    spec.tail = 1.0;
    const auto v = vanishing_barriers(Reaction(spec), 2.0);
    REQUIRE(v.feasible);
    CHECK(v.b > 0.0);
    CHECK(v.t1 == doctest::Approx(1.0 / (v.L * v.M)));
    for (const auto& b : v.barriers) CHECK(certify_residual(b).passed);
    CHECK_THROWS_AS(vanishing_barriers(Reaction(ReactionSpec::bistable(2.0, 0.45)), 2.0), PreconditionError);
}

TEST_CASE("barrier names round-trip") {
    for (auto k : {BarrierKind::ZKB, BarrierKind::SineSubsol, BarrierKind::VanishingTail})
        CHECK(barrier_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(barrier_kind_from_string("nope"));
}
