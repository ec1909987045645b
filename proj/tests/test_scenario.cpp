#include <doctest.h>

#include "pursuit/scenario.hpp"
#include "test_support.hpp"

using namespace pursuit;

TEST_CASE("validate computes the frame for the 1-D two-sided scenario") {
    const auto frame = validate(testing::two_sided_1d());
    REQUIRE(frame.pursuer_count() == 2);
    CHECK(frame.displacements[0] == Vec{1.0});
    CHECK(frame.displacements[1] == Vec{-2.0});
    CHECK(frame.directions[0] == Vec{1.0});
    CHECK(frame.directions[1] == Vec{-1.0});
    CHECK(frame.gaps[0] == 1.0);
    CHECK(frame.gaps[1] == 2.0);
    CHECK(frame.total_gap == 3.0);
}

TEST_CASE("validate rejects coincident positions") {
    Scenario s;
    s.dim = 2;
    s.evader = Vec{0, 0};
    s.pursuers = {Vec{0, 0}};
    CHECK_THROWS_AS((void)validate(s), DegenerateError);
}

TEST_CASE("validate, single pursuer") {
    Scenario s;
    s.dim = 2;
    s.evader = Vec{0, 0};
    s.pursuers = {Vec{1, 0}};
    const auto frame = validate(s);
    CHECK(frame.displacements[0] == Vec{-1, 0});
    CHECK(frame.directions[0] == Vec{-1, 0});
    CHECK(frame.gaps[0] == 1.0);
}

TEST_CASE("validate rejects dimension mismatches") {
    Scenario s;
    s.dim = 2;
    s.evader = Vec{0, 0};
    s.pursuers = {Vec{1, 0, 0}};
    CHECK_THROWS_AS((void)validate(s), UsageError);
}

TEST_CASE("frame reconstructs displacements (random)") {
    Rng rng(23);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 1 + rng() % 4;
        const auto s = testing::make_random_scenario(rng, n, 1 + rng() % 6);
        const auto frame = validate(s);
        for (std::size_t i = 0; i < frame.pursuer_count(); ++i) {
            CHECK(max_abs_diff(frame.directions[i] * frame.gaps[i], frame.displacements[i]) <
                  1e-12);
            CHECK(std::abs(norm(frame.directions[i]) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("scenario JSON round-trip") {
    const char* text = R"({"dim":2,"evader":[0.5,-1.25],"pursuers":[[1,2],[3,-4.5]],"labels":["P1","P2"]})";
    const Scenario s = load_scenario_text(text);
    CHECK(s.dim == 2);
    CHECK(s.pursuer_count() == 2);
    CHECK(s.labels[1] == "P2");

    const auto round = scenario_from_json(scenario_to_json(s));
    CHECK(round.evader == s.evader);
    CHECK(round.pursuers == s.pursuers);
    CHECK(round.labels == s.labels);
}

TEST_CASE("random scenarios round-trip bit-exactly through JSON text") {
    Rng rng(29);
    for (int k = 0; k < 50; ++k) {
        const auto s = testing::make_random_scenario(rng, 1 + rng() % 5, 1 + rng() % 5);
        const auto round = load_scenario_text(scenario_to_json(s).dump());
        CHECK(round.evader == s.evader);  // exact double equality
        CHECK(round.pursuers == s.pursuers);
    }
}

TEST_CASE("malformed scenario documents are parse errors") {
    CHECK_THROWS_AS((void)load_scenario_text("not json"), ParseError);
    CHECK_THROWS_AS((void)load_scenario_text(R"({"dim":2,"evader":[1,2]})"), ParseError);
    CHECK_THROWS_AS((void)load_scenario_text(R"({"dim":2,"evader":[1],"pursuers":[[1,2]]})"),
                    ParseError);
    CHECK_THROWS_AS((void)load_scenario_text(R"({"dim":2,"evader":[1,2],"pursuers":[[1]]})"),
                    ParseError);
    CHECK_THROWS_AS((void)load_scenario_text(R"({"dim":2,"evader":[1,2],"pursuers":[]})"),
                    ParseError);
    CHECK_THROWS_AS((void)load_scenario_text(R"({"dim":0,"evader":[],"pursuers":[[]]})"),
                    ParseError);
}

TEST_CASE("minimal single-pursuer document") {
    const Scenario s = load_scenario_text(R"({"dim":1,"evader":[0],"pursuers":[[2]]})");
    CHECK(s.pursuer_count() == 1);
    CHECK(s.labels.empty());
}
