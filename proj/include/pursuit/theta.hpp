#pragma once

/**
 * @file theta.hpp
 * @brief The total gap-closure rate Lambda, its infimum Theta over the unit
 *        ball, and the capture-time bound eta = omega(0) / Theta.
 *
 * Theta is approached from both sides: multi-start projected gradient descent
 * gives an upper estimate (the value at the best point found), while a sphere
 * grid with a Lipschitz correction gives a certified lower bound at dims 1-3.
 * The time bound eta must over-estimate capture time, so it is computed from
 * the lower bound, never from the optimizer's value.
 *
 * The grid only needs to cover the sphere: each Lambda term is concave along
 * rays through the origin, so Lambda's minimum over the ball is attained
 * either at v = 0 (value m, never smaller than the sphere minimum) or on the
 * sphere itself.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pursuit/classifier.hpp"
#include "pursuit/engine.hpp"
#include "pursuit/rng.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/strategies.hpp"

namespace pursuit {

/// Lambda(v) = sum_i [ sqrt(1 - ||v||^2 + (v,e_i)^2) - (v,e_i) ]  >=  0.
inline double lambda_total(const Vec& v, const PursuitFrame& frame) {
    require_admissible(v, "lambda_total");
    double s = 0.0;
    for (const Vec& e : frame.directions) s += omega_decrement_rate(v, e);
    return s;
}

/// Gradient of Lambda where it is smooth. At kinks (vanishing radicand) the
/// unbounded 1/r part is dropped and the smooth branch -e_i is kept, a fixed
/// subgradient choice that keeps runs reproducible.
inline Vec lambda_gradient(const Vec& v, const PursuitFrame& frame, double kink_tol = 1e-9) {
    const double vv = inner(v, v);
    Vec g = Vec::zero(v.dim());
    for (const Vec& e : frame.directions) {
        const double a = inner(v, e);
        const double r = std::sqrt(detail::radicand(vv, a));
        if (r > kink_tol) {
            g = g + (e * a - v) * (1.0 / r) - e;
        } else {
            g = g - e;
        }
    }
    return g;
}

struct ThetaOptions {
    std::size_t starts = 16;       ///< seeded random sphere starts (plus the fixed menu)
    std::uint64_t seed = 0;
    double grid_resolution = 1e-3; ///< sphere grid step (radians) for the certificate
    std::size_t max_iterations = 500;
    double step_tol = 1e-10;
};

struct ThetaReport {
    double theta_estimate = 0.0;  ///< Lambda at the best point found (upper estimate)
    Vec minimizer;
    std::optional<double> theta_lower_bound;  ///< certified, dims 1-3 only
    std::optional<double> eta_upper;          ///< omega(0) / theta_lower_bound, when bound > 0
    std::size_t starts = 0;
    bool converged = false;
};

namespace detail {

inline Vec project_ball(const Vec& v) {
    const double n = norm(v);
    return n > 1.0 ? v * (1.0 / n) : v;
}

struct DescentResult {
    Vec point;
    double value = 0.0;
    bool converged = false;
};

inline DescentResult projected_descent(Vec v, const PursuitFrame& frame,
                                       const ThetaOptions& opts) {
    double f = lambda_total(v, frame);
    bool converged = false;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        const Vec g = lambda_gradient(v, frame);
        double alpha = 1.0;
        Vec best = v;
        double best_f = f;
        bool moved = false;
        for (int k = 0; k < 50; ++k) {
            const Vec cand = project_ball(v - g * alpha);
            const double fc = lambda_total(cand, frame);
            const double step = norm(cand - v);
            // Armijo condition adapted to the projected step.
            if (fc <= f - 1e-4 * step * step / alpha) {
                best = cand;
                best_f = fc;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            converged = true;
            break;
        }
        const double step = norm(best - v);
        v = best;
        f = best_f;
        if (step < opts.step_tol) {
            converged = true;
            break;
        }
    }
    return {std::move(v), f, converged};
}

/// Sphere minimum of Lambda on an angle grid. On the sphere the radicand is
/// (v,e_i)^2, so each term collapses to |(v,e_i)| - (v,e_i).
inline double sphere_grid_min(const PursuitFrame& frame, double resolution, double* covering_out) {
    const std::size_t n = frame.dim;
    const auto& es = frame.directions;
    double best = std::numeric_limits<double>::infinity();
    auto eval = [&](double px, double py, double pz) {
        double s = 0.0;
        for (const Vec& e : es) {
            double a = e[0] * px;
            if (n > 1) a += e[1] * py;
            if (n > 2) a += e[2] * pz;
            s += std::abs(a) - a;
        }
        best = std::min(best, s);
    };
    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 1) {
        eval(1.0, 0.0, 0.0);
        eval(-1.0, 0.0, 0.0);
        *covering_out = 0.0;
    } else if (n == 2) {
        for (double a = 0.0; a < two_pi; a += resolution) eval(std::cos(a), std::sin(a), 0.0);
        *covering_out = resolution / 2.0;
    } else {
        for (double th = 0.0; th <= std::numbers::pi + 1e-15; th += resolution) {
            const double st = std::sin(th);
            const double ct = std::cos(th);
            for (double ph = 0.0; ph < two_pi; ph += resolution) {
                eval(st * std::cos(ph), st * std::sin(ph), ct);
                if (st == 0.0) break;
            }
        }
        // Lat-long covering radius is at most the full step in arc length.
        *covering_out = resolution;
    }
    return best;
}

}  // namespace detail

/// Multi-start projected gradient descent plus (dims 1-3) a certified grid
/// lower bound. Start menu: `opts.starts` seeded sphere directions, each
/// +-e_i, and each normalized -(e_i + e_j) midpoint; minimizers concentrate
/// where some (v, e_i) is negative, while +e_i nails the m = 1 minimum
/// exactly.
inline ThetaReport estimate_theta(const PursuitFrame& frame, const ThetaOptions& opts = {}) {
    const std::size_t m = frame.pursuer_count();
    std::vector<Vec> starts;
    Rng rng(opts.seed);
    for (std::size_t k = 0; k < opts.starts; ++k) starts.push_back(random_unit(rng, frame.dim));
    for (const Vec& e : frame.directions) {
        starts.push_back(-e);
        starts.push_back(e);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const Vec mid = -(frame.directions[i] + frame.directions[j]);
            if (norm(mid) > 1e-9) starts.push_back(unitize(mid));
        }
    }

    ThetaReport report;
    report.starts = starts.size();
    bool first = true;
    for (const Vec& s : starts) {
        auto r = detail::projected_descent(s, frame, opts);
        if (first || r.value < report.theta_estimate) {
            report.theta_estimate = r.value;
            report.minimizer = std::move(r.point);
            report.converged = r.converged;
            first = false;
        }
    }
    if (report.theta_estimate < 0.0) report.theta_estimate = 0.0;  // Lambda >= 0

    if (frame.dim <= 3) {
        double covering = 0.0;
        const double grid_min = detail::sphere_grid_min(frame, opts.grid_resolution, &covering);
        const double lipschitz = 2.0 * static_cast<double>(m);
        double lb = std::max(0.0, grid_min - lipschitz * covering);
        // The ball infimum is min(m, sphere infimum); m never binds for m >= 1.
        report.theta_lower_bound = lb;
        if (lb > 0.0) report.eta_upper = frame.total_gap / lb;
    }
    return report;
}

struct VerifyRun {
    std::string name;
    bool captured = false;
    double tau = 0.0;
    double slack = 0.0;    ///< eta - tau
    bool decay_ok = false; ///< omega(t) <= omega(0) - lb*t + 1e-6 along the run
};

struct VerifyReport {
    double theta_lower_bound = 0.0;
    double eta_upper = 0.0;
    std::vector<VerifyRun> runs;
    bool passed = false;
};

/// Simulates the closed-form pursuit against each evader control and checks
/// the capture-time bound tau <= eta. Requires a pursuit-regime scenario at
/// dims 1-3 so a positive certified lower bound on Theta exists.
inline VerifyReport verify_capture_bound(const Scenario& scenario, const PursuitFrame& frame,
                                         const std::vector<std::pair<std::string, Control>>& evaders,
                                         const SimulationOptions& sim_opts,
                                         const ThetaOptions& theta_opts = {}) {
    if (frame.dim > 3) throw UsageError("verify_capture_bound: needs dim <= 3 for a certificate");
    const auto cert = classify(frame);
    if (cert.regime != Regime::Pursuit) {
        throw UsageError("verify_capture_bound: scenario is not in the pursuit regime");
    }
    const auto theta = estimate_theta(frame, theta_opts);
    if (!theta.eta_upper) {
        throw UsageError("verify_capture_bound: grid bound on Theta is not positive");
    }

    VerifyReport report;
    report.theta_lower_bound = *theta.theta_lower_bound;
    report.eta_upper = *theta.eta_upper;
    report.passed = true;

    SimulationOptions opts = sim_opts;
    // Simulate past eta; capture must land at or before it.
    opts.horizon = std::max(opts.horizon, report.eta_upper * 1.5 + opts.dt);

    for (const auto& [name, control] : evaders) {
        const auto res = simulate(scenario, frame, control, ClosedFormStrategy{}, opts);
        VerifyRun run;
        run.name = name;
        run.captured = res.capture.has_value();
        if (res.capture) {
            run.tau = res.capture->time;
            run.slack = report.eta_upper - run.tau;
        }
        run.decay_ok = true;
        for (std::size_t k = 0; k < res.times.size(); ++k) {
            double total = 0.0;
            for (const auto& trace : res.omega_traces) total += trace[k];
            if (total > frame.total_gap - report.theta_lower_bound * res.times[k] + 1e-6) {
                run.decay_ok = false;
                break;
            }
        }
        if (!run.captured || run.tau > report.eta_upper + 1e-6 || !run.decay_ok) {
            report.passed = false;
        }
        report.runs.push_back(std::move(run));
    }
    return report;
}

inline nlohmann::json theta_report_to_json(const ThetaReport& r) {
    nlohmann::json j;
    j["theta_estimate"] = r.theta_estimate;
    j["minimizer"] = r.minimizer.coords();
    j["theta_lower_bound"] =
        r.theta_lower_bound ? nlohmann::json(*r.theta_lower_bound) : nlohmann::json(nullptr);
    j["eta_upper"] = r.eta_upper ? nlohmann::json(*r.eta_upper) : nlohmann::json(nullptr);
    j["converged"] = r.converged;
    return j;
}

}  // namespace pursuit
