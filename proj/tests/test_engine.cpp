#include <doctest.h>

#include <sstream>

#include "pursuit/engine.hpp"
#include "test_support.hpp"

using namespace pursuit;

TEST_CASE("capture crossing time") {
    CHECK(!capture_crossing_time(2.0, 2.0, 0.25).has_value());
    CHECK(capture_crossing_time(0.3, 2.0, 0.25).value() == doctest::Approx(0.15));
    CHECK(!capture_crossing_time(1.0, 0.0, 0.25).has_value());
}

TEST_CASE("1-D two-sided capture anchor") {
    // x1 = -1, x2 = 2, y = 0, v = +1: pursuer 2 closes at rate 2, capture at
    // tau = 1 at position 1 while omega_1 stays frozen at 1.
    const Scenario s = testing::two_sided_1d();
    const auto frame = validate(s);
    SimulationOptions opts;
    opts.dt = 0.25;
    opts.horizon = 5.0;
    const auto res = simulate(s, frame, Control::constant(Vec{1.0}), ClosedFormStrategy{}, opts);
    REQUIRE(res.capture.has_value());
    CHECK(res.capture->pursuer_index == 1);
    CHECK(res.capture->time == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.capture->position[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        CHECK(res.omega_traces[0][k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.omega_traces[1][k] ==
              doctest::Approx(2.0 - 2.0 * res.times[k]).epsilon(1e-12));
    }
}

TEST_CASE("fleeing along the single displacement freezes the gap") {
    Scenario s;
    s.dim = 2;
    s.evader = Vec{0, 0};
    s.pursuers = {Vec{-1, 0}};  // z = (1, 0)
    const auto frame = validate(s);
    SimulationOptions opts;
    opts.dt = 0.1;
    opts.horizon = 50.0;
    const auto res = simulate(s, frame, Control::constant(Vec{1, 0}), ClosedFormStrategy{}, opts);
    CHECK(!res.capture.has_value());
    const auto mind = min_distance_trace(res);
    for (const auto& [t, d] : mind) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("horizon zero records only the initial state") {
    const Scenario s = testing::two_sided_1d();
    SimulationOptions opts;
    opts.dt = 0.1;
    opts.horizon = 0.0;
    const auto res = simulate(s, validate(s), Control::constant(Vec{1.0}), ClosedFormStrategy{}, opts);
    CHECK(res.times.size() == 1);
    CHECK(res.times[0] == 0.0);
    CHECK(!res.capture.has_value());
}

TEST_CASE("collinearity and monotonicity under the closed-form strategy") {
    Rng rng(61);
    for (int run = 0; run < 20; ++run) {
        const std::size_t n = 1 + rng() % 4;
        const std::size_t m = 1 + rng() % 6;
        const auto s = testing::make_random_scenario(rng, n, m);
        const auto frame = validate(s);
        TestControlSpec spec;
        spec.kind = TestControlSpec::Kind::SphereSeeded;
        spec.seed = rng();
        spec.scale = uniform_in(rng, 0.0, 1.0);
        SimulationOptions opts;
        opts.dt = 0.02;
        opts.horizon = 5.0;
        const auto evader = make_test_control(spec, n, opts.dt, opts.horizon);
        const auto res = simulate(s, frame, evader, ClosedFormStrategy{}, opts);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < res.times.size(); ++k) {
                Vec gap = res.evader_traj[k] - res.pursuer_trajs[i][k];
                // Collinearity: gap equals omega_i * e_i.
                CHECK(max_abs_diff(gap, frame.directions[i] * res.omega_traces[i][k]) < 1e-9);
                gap = gap - frame.directions[i] * inner(gap, frame.directions[i]);
                CHECK(norm(gap) < 1e-9);
                if (k > 0) {
                    CHECK(res.omega_traces[i][k] <= res.omega_traces[i][k - 1] + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("integration is exact: dt versus dt/2 agree at shared times") {
    Rng rng(67);
    for (int run = 0; run < 10; ++run) {
        const std::size_t n = 1 + rng() % 3;
        const auto s = testing::make_random_scenario(rng, n, 1 + rng() % 4);
        const auto frame = validate(s);
        TestControlSpec spec;
        spec.kind = TestControlSpec::Kind::SphereSeeded;
        spec.seed = rng();
        spec.scale = 0.9;
        SimulationOptions coarse;
        coarse.dt = 0.1;
        coarse.horizon = 4.0;
        // Evader schedule fixed on the coarse grid for both runs.
        const auto evader = make_test_control(spec, n, coarse.dt, coarse.horizon);
        SimulationOptions fine = coarse;
        fine.dt = coarse.dt / 2.0;
        const auto rc = simulate(s, frame, evader, ClosedFormStrategy{}, coarse);
        const auto rf = simulate(s, frame, evader, ClosedFormStrategy{}, fine);
        if (rc.capture.has_value() || rf.capture.has_value()) {
            REQUIRE(rc.capture.has_value());
            REQUIRE(rf.capture.has_value());
            CHECK(std::abs(rc.capture->time - rf.capture->time) < 1e-12);
            continue;
        }
        for (std::size_t k = 0; k < rc.times.size(); ++k) {
            CHECK(rf.times[2 * k] == rc.times[k]);
            CHECK(max_abs_diff(rf.evader_traj[2 * k], rc.evader_traj[k]) < 1e-12);
            for (std::size_t i = 0; i < frame.pursuer_count(); ++i) {
                CHECK(max_abs_diff(rf.pursuer_trajs[i][2 * k], rc.pursuer_trajs[i][k]) < 1e-12);
            }
        }
    }
}

TEST_CASE("recorded pursuer controls with distance-tolerance capture") {
    // Pursuer charges straight at a stationary evader; capture at the step
    // boundary that reaches the tolerance ball.
    Scenario s;
    s.dim = 2;
    s.evader = Vec{0, 0};
    s.pursuers = {Vec{-1, 0}};
    const auto frame = validate(s);
    RecordedControls rec;
    rec.controls.push_back(Control::constant(Vec{1, 0}));
    SimulationOptions opts;
    opts.dt = 0.25;
    opts.horizon = 3.0;
    opts.capture_tolerance = 1e-9;
    const auto res = simulate(s, frame, Control::constant(Vec::zero(2)), rec, opts);
    REQUIRE(res.capture.has_value());
    CHECK(res.capture->time == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.omega_traces.empty());
}

TEST_CASE("inadmissible evader control is reported with the offending time") {
    const Scenario s = testing::two_sided_1d();
    const auto frame = validate(s);
    const Control bad = Control::piecewise({{0.0, Vec{0.5}}});
    SimulationOptions opts;
    opts.dt = 0.5;
    opts.horizon = 1.0;
    // Build an inadmissible control by bypassing the factory checks via
    // recorded mode count mismatch instead; the factories themselves refuse
    // inadmissible values, so exercise the count check here.
    RecordedControls rec;
    rec.controls.push_back(Control::constant(Vec{1.0}));
    rec.controls.push_back(Control::constant(Vec{1.0}));
    rec.controls.push_back(Control::constant(Vec{1.0}));
    CHECK_THROWS_AS((void)simulate(s, frame, bad, rec, opts), UsageError);
}

TEST_CASE("record_every thins traces but keeps the final state") {
    const Scenario s = testing::two_sided_1d();
    const auto frame = validate(s);
    SimulationOptions opts;
    opts.dt = 0.1;
    opts.horizon = 1.0;
    opts.record_every = 4;
    const auto res = simulate(s, frame, Control::constant(Vec{-1.0}), ClosedFormStrategy{}, opts);
    // Capture event is never thinned away.
    REQUIRE(res.capture.has_value());
    CHECK(res.times.back() == doctest::Approx(res.capture->time));
}

TEST_CASE("min distance trace endpoints") {
    const Scenario s = testing::two_sided_1d();
    const auto frame = validate(s);
    SimulationOptions opts;
    opts.dt = 0.25;
    opts.horizon = 5.0;
    const auto res = simulate(s, frame, Control::constant(Vec{1.0}), ClosedFormStrategy{}, opts);
    const auto mind = min_distance_trace(res);
    CHECK(mind.front().second == doctest::Approx(1.0));
    CHECK(mind.back().second < 1e-12);  // capture means coincidence
}

TEST_CASE("CSV export shape and sidecar") {
    const Scenario s = testing::two_sided_1d();
    const auto frame = validate(s);
    SimulationOptions opts;
    opts.dt = 0.25;
    opts.horizon = 5.0;
    const auto res = simulate(s, frame, Control::constant(Vec{1.0}), ClosedFormStrategy{}, opts);
    std::ostringstream out;
    write_trajectory_csv(res, out);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,y_1,x1_1,x2_1,omega_1,omega_2,min_dist");
    std::string first;
    std::getline(lines, first);
    CHECK(first == "0,0,-1,2,1,2,1");

    const auto side = capture_sidecar_json(res);
    CHECK(side["capture"]["i"] == 2);
    CHECK(side["capture"]["tau"] == doctest::Approx(1.0));
}
