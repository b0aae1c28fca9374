#include "rpme/error.hpp"
#include "rpme/reactions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace rpme;

TEST_CASE("built-in formulas") {
    const Reaction logistic(ReactionSpec::monostable(2.0));
    CHECK(logistic(0.5) == doctest::Approx(0.25));
    CHECK(logistic(0.0) == 0.0);
    CHECK(logistic(1.5) < 0.0);

    const Reaction bi(ReactionSpec::bistable(2.0, 0.25));
    CHECK(bi(0.5) == doctest::Approx(0.5 * 0.25 * 0.5));
    CHECK(bi(0.1) < 0.0);

    const Reaction comb(ReactionSpec::combustion(2.0, 0.3));
    CHECK(comb(0.2) == 0.0);
    CHECK(comb(0.3) == 0.0);
    CHECK(comb(0.6) == doctest::Approx(0.3 * 0.4));
    CHECK_FALSE(comb.has_second_derivative());
    CHECK(logistic.has_second_derivative());

    CHECK_THROWS_AS(logistic(-0.1), DomainError);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(Reaction(ReactionSpec::monostable(0.5)), PreconditionError);
    CHECK_THROWS_AS(Reaction(ReactionSpec::bistable(2.0, 1.5)), PreconditionError);
    auto s = ReactionSpec::bistable(2.0, 0.25);
    s.theta.reset();
    CHECK_THROWS_AS(Reaction{s}, PreconditionError);
    auto t = ReactionSpec::bistable(2.0, 0.25);
    t.p0 = 1.5;
    CHECK_THROWS_AS(Reaction{t}, PreconditionError);
}

TEST_CASE("derivative matches central differences") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> U(0.05, 1.4);
    for (const auto& spec : {ReactionSpec::monostable(2.0), ReactionSpec::bistable(3.0, 0.4)}) {
        const Reaction f(spec);
        for (int i = 0; i < 50; ++i) {
            const double u = U(gen), h = 1e-6;
            CHECK(f.derivative(u) == doctest::Approx((f(u + h) - f(u - h)) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("growth and Lipschitz bounds of the logistic term") {
    const Reaction f(ReactionSpec::monostable(2.0));
    CHECK(f.growth_bound(2.0) == doctest::Approx(1.0));
    CHECK(f.lipschitz(2.0) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("weighted primitive against Gauss-Kronrod") {
    using boost::math::quadrature::gauss_kronrod;
    for (double m : {1.5, 2.0, 3.0}) {
        const Reaction f(ReactionSpec::bistable(m, 0.3));
        for (double q : {0.1, 0.3, 0.7, 1.0}) {
            const double ref =
                gauss_kronrod<double, 31>::integrate([&](double r) { return std::pow(r, m - 1) * f(r); }, 0.0, q);
            CHECK(f.weighted_primitive(q) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("theta1 balances the weighted primitive") {
    using boost::math::quadrature::gauss_kronrod;
    const double m = 2.0;
    const Reaction f(ReactionSpec::bistable(m, 0.25));
    auto I = [&](double q) {
        return gauss_kronrod<double, 61>::integrate([&](double r) { return std::pow(r, m - 1) * f(r); }, 0.0, q);
    };
    boost::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(I, 0.3, 1.0, boost::math::tools::eps_tolerance<double>(50),
                                                         iters);
    const auto lv = special_levels(f, m);
    REQUIRE(lv.theta1);
    CHECK(*lv.theta1 == doctest::Approx(0.5 * (a + b)).epsilon(1e-8));
    CHECK(*lv.big_theta == doctest::Approx(m / (m - 1) * 0.25));
}

TEST_CASE("pressure reaction and conversions") {
    const double m = 3.0;
    const Reaction f(ReactionSpec::monostable(m));
    const PressureReaction g(f);
    for (double u : {0.1, 0.5, 0.9}) {
        const double v = pressure_of(u, m);
        CHECK(density_of(v, m) == doctest::Approx(u));
        // g(v) = m u^(m-2) f(u)
        CHECK(g.g(v) == doctest::Approx(m * std::pow(u, m - 2) * f(u)));
    }
    CHECK(g.g(0.0) == 0.0);
}

TEST_CASE("reaction serialization round-trips") {
    auto s = ReactionSpec::bistable_decay(2.5, 0.3, 1.5, 0.2);
    s.p0 = 4.5;
    s.tail = 2.0;
    const auto j = to_json(s);
    CHECK(reaction_from_json(nlohmann::json::parse(j.dump())) == s);
    const auto c = ReactionSpec::custom(2.0, {0.0, 1.0, -1.0}, 0.1);
    CHECK(reaction_from_json(nlohmann::json::parse(to_json(c).dump())) == c);
    CHECK_THROWS_AS(reaction_from_json(nlohmann::json::parse(R"({"kind":"nope","m":2})")), ConfigError);
}
