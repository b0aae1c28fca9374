#include "rpme/config.hpp"
#include "rpme/error.hpp"

#include <doctest.h>

#include <string>

using namespace rpme;

namespace {

const std::string kRun = R"({
  "command": "run",
  "m": 2,
  "reaction": {"kind": "bistable", "theta": 0.3},
  "grid": {"dx": 0.0078125, "pad": 1},
  "u0": {"kind": "parabola", "params": {"sigma": 1.2, "b": 1}},
  "t_end": 3
})";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("a run config parses with defaults") {
    const auto c = parse_config(kRun);
    CHECK(c.command == Command::Run);
    CHECK(c.run.m() == 2.0);
    CHECK(*c.run.reaction.theta == doctest::Approx(0.3));
    CHECK(c.run.grid.dx == 0.0078125);
    CHECK(c.run.t_end == 3.0);
    CHECK(c.run.record_stride == 100);
    CHECK(c.run.tol.vanish == 1e-4);
}

TEST_CASE("errors carry their path and are all reported") {
    std::string bad = kRun;
    bad.replace(bad.find("\"m\": 2"), 6, "\"m\": 1");
    CHECK(error_of(bad).find("m: m must exceed 1") != std::string::npos);

    const auto msg = error_of(R"({"command": "run", "m": 2, "m": 3, "reaction": {"kind": "monostable", "bogus": 1},
                                 "u0": {"kind": "parabola"}, "t_end": -1, "extra": true})");
    CHECK(msg.find("m: duplicate key") != std::string::npos);
    CHECK(msg.find("reaction.bogus: unknown key") != std::string::npos);
    CHECK(msg.find("extra: unknown key") != std::string::npos);
    CHECK(msg.find("t_end") != std::string::npos);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("configs round-trip through JSON") {
    const auto c = parse_config(kRun);
    const auto again = parse_config(to_json(c).dump());
    CHECK(again == c);
    CHECK(config_hash(to_json(c)) == config_hash(to_json(again)));
}

TEST_CASE("FNV-1a hash") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("tolerance overrides") {
    Tolerances t;
    apply_overrides(t, {"vanish_tol=1e-3", "spread_tol=0.1"});
    CHECK(t.vanish == 1e-3);
    CHECK(t.spread == 0.1);
    CHECK(t.trans == 0.05);
    CHECK_THROWS(apply_overrides(t, {"nonsense=1"}));
    CHECK_THROWS(apply_overrides(t, {"vanish_tol"}));
}
