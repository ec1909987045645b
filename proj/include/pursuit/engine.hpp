#pragma once

/**
 * @file engine.hpp
 * @brief Trajectory integration with event-exact capture detection.
 *
 * Controls are piecewise-constant on the step grid, so every integral in the
 * equations of motion is a finite sum and the state update y += v*dt is exact.
 * Under the closed-form pursuer strategy the per-pursuer gap is affine in t on
 * each step, which lets the capture instant be solved exactly inside a step
 * instead of being detected a step late.
 */

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pursuit/scenario.hpp"
#include "pursuit/strategies.hpp"
#include "pursuit/vec.hpp"

namespace pursuit {

struct SimulationOptions {
    double dt = 0.01;
    double horizon = 10.0;
    /// Distance threshold for capture under recorded (non-strategy) pursuer
    /// motions, where exact coincidence is measure-zero in floating point.
    double capture_tolerance = 1e-9;
    std::size_t record_every = 1;

    void check() const {
        if (dt <= 0.0) throw UsageError("simulate: dt must be positive");
        if (horizon < 0.0) throw UsageError("simulate: horizon must be nonnegative");
        if (capture_tolerance < 0.0) throw UsageError("simulate: capture tolerance < 0");
        if (record_every == 0) throw UsageError("simulate: record_every must be positive");
    }
};

struct CaptureEvent {
    std::size_t pursuer_index = 0;  ///< 0-based
    double time = 0.0;
    Vec position;
};

struct SimulationResult {
    std::vector<double> times;
    std::vector<Vec> evader_traj;
    std::vector<std::vector<Vec>> pursuer_trajs;       ///< [pursuer][sample]
    std::vector<std::vector<double>> omega_traces;     ///< [pursuer][sample]; empty unless closed-form strategy
    std::optional<CaptureEvent> capture;
};

/// Pursuers follow the closed-form strategy built from the evader's current
/// control value and the frozen initial directions.
struct ClosedFormStrategy {};

/// Pursuers replay externally supplied admissible controls, one per pursuer.
struct RecordedControls {
    std::vector<Control> controls;
};

using PursuerMode = std::variant<ClosedFormStrategy, RecordedControls>;

/// Zero-crossing of the affine gap omega(s) = omega0 - rate*s within a step of
/// length dt. Returns the crossing offset, or nullopt when the gap stays
/// positive through the step.
inline std::optional<double> capture_crossing_time(double omega_at_step_start, double rate,
                                                   double dt) {
    if (rate <= 0.0) return std::nullopt;
    if (omega_at_step_start - rate * dt > 0.0) return std::nullopt;
    return omega_at_step_start / rate;
}

inline SimulationResult simulate(const Scenario& scenario, const PursuitFrame& frame,
                                 const Control& evader, const PursuerMode& mode,
                                 const SimulationOptions& opts) {
    opts.check();
    const std::size_t m = frame.pursuer_count();
    const bool closed_form = std::holds_alternative<ClosedFormStrategy>(mode);
    const RecordedControls* recorded = std::get_if<RecordedControls>(&mode);
    if (recorded && recorded->controls.size() != m) {
        throw UsageError("simulate: recorded controls count != pursuer count");
    }

    Vec y = scenario.evader;
    std::vector<Vec> x = scenario.pursuers;
    std::vector<double> omega = frame.gaps;

    SimulationResult res;
    res.pursuer_trajs.resize(m);
    if (closed_form) res.omega_traces.resize(m);

    auto record = [&](double t) {
        res.times.push_back(t);
        res.evader_traj.push_back(y);
        for (std::size_t i = 0; i < m; ++i) {
            res.pursuer_trajs[i].push_back(x[i]);
            if (closed_form) res.omega_traces[i].push_back(omega[i]);
        }
    };
    record(0.0);

    std::size_t step = 0;
    while (true) {
        const double t = step * opts.dt;
        if (t >= opts.horizon - 1e-15) break;
        const double step_dt = std::min(opts.dt, opts.horizon - t);

        const Vec& v = evader.value_at(t);
        if (norm(v) > 1.0 + kAdmissibleTol) {
            throw InadmissibleControlError("simulate: evader control exceeds unit norm at t=" +
                                           std::to_string(t));
        }

        if (closed_form) {
            // Exact within-step capture: omega_i is affine on the step.
            std::size_t captor = m;
            double best_tau = std::numeric_limits<double>::infinity();
            std::vector<double> rate(m);
            for (std::size_t i = 0; i < m; ++i) {
                rate[i] = omega_decrement_rate(v, frame.directions[i]);
                if (auto tau = capture_crossing_time(omega[i], rate[i], step_dt);
                    tau && *tau < best_tau) {
                    best_tau = *tau;
                    captor = i;
                }
            }
            if (captor != m) {
                y = y + v * best_tau;
                for (std::size_t i = 0; i < m; ++i) {
                    x[i] = x[i] + pursuer_control(v, frame.directions[i]) * best_tau;
                    omega[i] -= rate[i] * best_tau;
                }
                omega[captor] = 0.0;
                record(t + best_tau);
                res.capture = CaptureEvent{captor, t + best_tau, y};
                return res;
            }
            y = y + v * step_dt;
            for (std::size_t i = 0; i < m; ++i) {
                x[i] = x[i] + pursuer_control(v, frame.directions[i]) * step_dt;
                omega[i] -= rate[i] * step_dt;
            }
        } else {
            y = y + v * step_dt;
            for (std::size_t i = 0; i < m; ++i) {
                const Vec& u = recorded->controls[i].value_at(t);
                if (norm(u) > 1.0 + kAdmissibleTol) {
                    throw InadmissibleControlError("simulate: pursuer " + std::to_string(i + 1) +
                                                   " control exceeds unit norm at t=" +
                                                   std::to_string(t));
                }
                x[i] = x[i] + u * step_dt;
            }
        }

        ++step;
        const double t_next = t + step_dt;
        const bool last = t_next >= opts.horizon - 1e-15;
        if (step % opts.record_every == 0 || last) record(t_next);

        if (!closed_form) {
            // Boundary-sampled capture check with the distance tolerance.
            for (std::size_t i = 0; i < m; ++i) {
                if (norm(y - x[i]) <= opts.capture_tolerance) {
                    if (res.times.back() != t_next) record(t_next);
                    res.capture = CaptureEvent{i, t_next, y};
                    return res;
                }
            }
        }
        if (last) break;
    }
    return res;
}

/// min_i ||y(t) - x_i(t)|| at each recorded sample.
inline std::vector<std::pair<double, double>> min_distance_trace(const SimulationResult& res) {
    std::vector<std::pair<double, double>> out;
    out.reserve(res.times.size());
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& traj : res.pursuer_trajs) {
            best = std::min(best, norm(res.evader_traj[k] - traj[k]));
        }
        out.emplace_back(res.times[k], best);
    }
    return out;
}

namespace detail {

/// Shortest round-trip decimal for a double (used for byte-stable CSV output).
inline std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

}  // namespace detail

/// CSV columns: t, evader coordinates, each pursuer's coordinates, per-pursuer
/// omega (closed-form strategy only), min distance.
inline void write_trajectory_csv(const SimulationResult& res, std::ostream& out) {
    const std::size_t m = res.pursuer_trajs.size();
    const std::size_t n = res.evader_traj.empty() ? 0 : res.evader_traj.front().dim();
    out << 't';
    for (std::size_t k = 0; k < n; ++k) out << ",y_" << (k + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) out << ",x" << (i + 1) << '_' << (k + 1);
    }
    if (!res.omega_traces.empty()) {
        for (std::size_t i = 0; i < m; ++i) out << ",omega_" << (i + 1);
    }
    out << ",min_dist\n";

    const auto mind = min_distance_trace(res);
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        out << detail::format_double(res.times[k]);
        for (std::size_t c = 0; c < n; ++c) out << ',' << detail::format_double(res.evader_traj[k][c]);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t c = 0; c < n; ++c) {
                out << ',' << detail::format_double(res.pursuer_trajs[i][k][c]);
            }
        }
        for (const auto& trace : res.omega_traces) out << ',' << detail::format_double(trace[k]);
        out << ',' << detail::format_double(mind[k].second) << '\n';
    }
}

inline nlohmann::json capture_sidecar_json(const SimulationResult& res) {
    nlohmann::json j;
    if (res.capture) {
        j["capture"] = {{"i", res.capture->pursuer_index + 1}, {"tau", res.capture->time}};
    } else {
        j["capture"] = nullptr;
    }
    return j;
}

}  // namespace pursuit
