#include <doctest.h>

#include "pursuit/simplex.hpp"

using namespace pursuit;

TEST_CASE("textbook LP") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    LpProblem p;
    p.a = {{1, 0}, {0, 2}, {3, 2}};
    p.b = {4, 12, 18};
    p.c = {3, 5};
    const auto sol = solve_lp(p);
    CHECK(sol.bounded);
    CHECK(sol.value == doctest::Approx(36.0));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(6.0));
}

TEST_CASE("degenerate rows do not cycle") {
    // Several zero right-hand sides; Bland's rule must still terminate.
    LpProblem p;
    p.a = {{1, -1}, {-1, 1}, {1, 1}};
    p.b = {0, 0, 2};
    p.c = {1, 1};
    const auto sol = solve_lp(p);
    CHECK(sol.bounded);
    CHECK(sol.value == doctest::Approx(2.0));
}

TEST_CASE("unbounded detection") {
    LpProblem p;
    p.a = {{-1.0, 0.0}};
    p.b = {1};
    p.c = {1, 0};
    CHECK(!solve_lp(p).bounded);
}

TEST_CASE("negative rhs is rejected") {
    LpProblem p;
    p.a = {{1.0}};
    p.b = {-1};
    p.c = {1};
    CHECK_THROWS_AS((void)solve_lp(p), UsageError);
}

TEST_CASE("zero objective returns the slack basis") {
    LpProblem p;
    p.a = {{1.0, 1.0}};
    p.b = {1};
    p.c = {0, 0};
    const auto sol = solve_lp(p);
    CHECK(sol.value == 0.0);
    CHECK(sol.iterations == 0);
}
