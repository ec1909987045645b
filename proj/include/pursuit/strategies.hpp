#pragma once

/**
 * @file strategies.hpp
 * @brief Closed-form pursuer strategy, the constant evasion strategy, and a
 *        small library of admissible piecewise-constant test controls.
 *
 * The pursuer strategy is a counter-strategy: it is evaluated against the
 * evader's current control value, and it depends on the geometry only through
 * the initial direction e_i (fixed at t = 0). It deliberately does NOT refresh
 * e_i from current positions.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/rng.hpp"
#include "pursuit/vec.hpp"

namespace pursuit {

/// Admissibility slack on ||v|| <= 1.
inline constexpr double kAdmissibleTol = 1e-12;

inline void require_admissible(const Vec& v, const char* who) {
    if (norm(v) > 1.0 + kAdmissibleTol) {
        throw InadmissibleControlError(std::string(who) + ": control norm " +
                                       std::to_string(norm(v)) + " exceeds 1");
    }
}

namespace detail {

/// 1 - ||v||^2 + (v,e)^2, clamped to 0 when within -1e-12 of it. The quantity
/// is nonnegative on the admissible set; anything more negative signals a bug.
/// When ||v||^2 sits within rounding of 1 the first two terms cancel exactly
/// in the reals but leave ~1e-16 of noise in doubles, which the square root
/// amplifies to ~1e-8 near (v,e) = 0; snapping to the on-sphere value (v,e)^2
/// keeps the sharp identities sharp.
inline double radicand(double v_norm_sq, double v_dot_e) {
    if (std::abs(1.0 - v_norm_sq) <= 1e-14) return v_dot_e * v_dot_e;
    double r = 1.0 - v_norm_sq + v_dot_e * v_dot_e;
    if (r < 0.0) {
        if (r < -kTightTol) throw InternalError("radicand negative beyond tolerance");
        r = 0.0;
    }
    return r;
}

}  // namespace detail

/// The closed-form pursuer control:
///   u = v - (v,e)e + e * sqrt(1 - ||v||^2 + (v,e)^2).
/// For admissible v and unit e the result has unit norm exactly (the cross
/// term cancels the tangential energy).
inline Vec pursuer_control(const Vec& v, const Vec& e) {
    require_admissible(v, "pursuer_control");
    const double a = inner(v, e);
    const double root = std::sqrt(detail::radicand(inner(v, v), a));
    return v + e * (root - a);
}

/// Instantaneous shrink rate of the gap along e under the closed-form strategy:
///   sqrt(1 - ||v||^2 + (v,e)^2) - (v,e)  >=  0.
inline double omega_decrement_rate(const Vec& v, const Vec& e) {
    require_admissible(v, "omega_decrement_rate");
    const double a = inner(v, e);
    return std::sqrt(detail::radicand(inner(v, v), a)) - a;
}

/// A piecewise-constant admissible control: value_at(t) returns the value of
/// the piece whose interval contains t. Immutable once built; seeded
/// generators expand their whole schedule at construction.
class Control {
  public:
    /// Constant control v(t) = value.
    static Control constant(Vec value) {
        require_admissible(value, "Control::constant");
        Control c;
        c.starts_ = {0.0};
        c.values_ = {std::move(value)};
        return c;
    }

    /// Explicit schedule of (t_start, value) pieces; starts must be increasing
    /// from 0.
    static Control piecewise(std::vector<std::pair<double, Vec>> schedule) {
        if (schedule.empty()) throw UsageError("Control::piecewise: empty schedule");
        if (schedule.front().first != 0.0) {
            throw UsageError("Control::piecewise: schedule must start at t = 0");
        }
        Control c;
        for (auto& [t, v] : schedule) {
            if (!c.starts_.empty() && t <= c.starts_.back()) {
                throw UsageError("Control::piecewise: start times must increase");
            }
            require_admissible(v, "Control::piecewise");
            c.starts_.push_back(t);
            c.values_.push_back(std::move(v));
        }
        return c;
    }

    const Vec& value_at(double t) const {
        // Last piece with start <= t; queries before 0 clamp to the first piece.
        auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
        const std::size_t idx = it == starts_.begin() ? 0 : (it - starts_.begin()) - 1;
        return values_[idx];
    }

    std::size_t dim() const { return values_.front().dim(); }
    std::size_t piece_count() const { return values_.size(); }

  private:
    Control() = default;
    std::vector<double> starts_;
    std::vector<Vec> values_;
};

/// The evasion strategy: run with constant velocity p forever. p must be unit.
inline Control evasion_control(const Vec& p) {
    if (std::abs(norm(p) - 1.0) > kTightTol) {
        throw UsageError("evasion_control: witness must be a unit vector");
    }
    return Control::constant(p);
}

/// Test-control generators. All outputs are admissible; a fixed seed gives an
/// identical schedule on every platform.
struct TestControlSpec {
    enum class Kind { Constant, SphereSeeded, PlanarRotation };
    Kind kind = Kind::Constant;
    Vec direction;                 ///< Constant: the emitted value (norm <= 1)
    std::uint64_t seed = 0;        ///< SphereSeeded
    double scale = 1.0;            ///< SphereSeeded: speed factor in [0, 1]
    std::size_t plane_i = 0, plane_j = 1;  ///< PlanarRotation: coordinate 2-plane
    double rate = 1.0;             ///< PlanarRotation: angular rate, rad per time
};

inline Control make_test_control(const TestControlSpec& spec, std::size_t dim, double dt,
                                 double horizon) {
    if (dt <= 0.0) throw UsageError("make_test_control: dt must be positive");
    switch (spec.kind) {
        case TestControlSpec::Kind::Constant:
            return Control::constant(spec.direction);
        case TestControlSpec::Kind::SphereSeeded: {
            if (spec.scale < 0.0 || spec.scale > 1.0) {
                throw UsageError("make_test_control: scale must lie in [0, 1]");
            }
            Rng rng(spec.seed);
            std::vector<std::pair<double, Vec>> schedule;
            const std::size_t steps = std::max<std::size_t>(1, std::ceil(horizon / dt));
            schedule.reserve(steps);
            for (std::size_t k = 0; k < steps; ++k) {
                Vec v = spec.scale == 0.0 ? Vec::zero(dim) : random_unit(rng, dim) * spec.scale;
                schedule.emplace_back(k * dt, std::move(v));
            }
            return Control::piecewise(std::move(schedule));
        }
        case TestControlSpec::Kind::PlanarRotation: {
            if (spec.plane_i == spec.plane_j || spec.plane_i >= dim || spec.plane_j >= dim) {
                throw UsageError("make_test_control: invalid rotation plane");
            }
            std::vector<std::pair<double, Vec>> schedule;
            const std::size_t steps = std::max<std::size_t>(1, std::ceil(horizon / dt));
            schedule.reserve(steps);
            for (std::size_t k = 0; k < steps; ++k) {
                const double a = spec.rate * (k * dt);
                std::vector<double> c(dim, 0.0);
                c[spec.plane_i] = std::cos(a);
                c[spec.plane_j] = std::sin(a);
                schedule.emplace_back(k * dt, Vec(std::move(c)));
            }
            return Control::piecewise(std::move(schedule));
        }
    }
    throw UsageError("make_test_control: unknown generator kind");
}

/// Parses the CLI control grammar:
///   constant:[c1,...,cn]
///   sphere:seed=S,scale=F
///   rotate:plane=(i,j),rate=F        (1-based coordinate indices)
inline TestControlSpec parse_control_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("control spec: missing ':' in \"" + text + "\"");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    TestControlSpec spec;
    if (kind == "constant") {
        if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']') {
            throw UsageError("control spec: constant expects [c1,...,cn]");
        }
        std::vector<double> coords;
        std::string body = rest.substr(1, rest.size() - 2);
        std::size_t pos = 0;
        while (pos < body.size()) {
            std::size_t next = body.find(',', pos);
            if (next == std::string::npos) next = body.size();
            try {
                coords.push_back(std::stod(body.substr(pos, next - pos)));
            } catch (const std::exception&) {
                throw UsageError("control spec: bad number in \"" + text + "\"");
            }
            pos = next + 1;
        }
        if (coords.empty()) throw UsageError("control spec: constant needs coordinates");
        spec.kind = TestControlSpec::Kind::Constant;
        spec.direction = Vec(std::move(coords));
        require_admissible(spec.direction, "control spec");
        return spec;
    }

    auto parse_kv = [&](const std::string& key) -> std::optional<std::string> {
        std::size_t pos = rest.find(key + "=");
        if (pos == std::string::npos) return std::nullopt;
        pos += key.size() + 1;
        std::size_t end = pos;
        int depth = 0;
        while (end < rest.size() && (rest[end] != ',' || depth > 0)) {
            if (rest[end] == '(') ++depth;
            if (rest[end] == ')') --depth;
            ++end;
        }
        return rest.substr(pos, end - pos);
    };

    if (kind == "sphere") {
        spec.kind = TestControlSpec::Kind::SphereSeeded;
        if (auto s = parse_kv("seed")) spec.seed = std::stoull(*s);
        if (auto s = parse_kv("scale")) spec.scale = std::stod(*s);
        if (spec.scale < 0.0 || spec.scale > 1.0) {
            throw UsageError("control spec: sphere scale must lie in [0, 1]");
        }
        return spec;
    }
    if (kind == "rotate") {
        spec.kind = TestControlSpec::Kind::PlanarRotation;
        if (auto s = parse_kv("plane")) {
            unsigned i = 0, j = 0;
            if (std::sscanf(s->c_str(), "(%u,%u)", &i, &j) != 2 || i == 0 || j == 0) {
                throw UsageError("control spec: rotate plane expects (i,j), 1-based");
            }
            spec.plane_i = i - 1;
            spec.plane_j = j - 1;
        }
        if (auto s = parse_kv("rate")) spec.rate = std::stod(*s);
        return spec;
    }
    throw UsageError("control spec: unknown generator \"" + kind + "\"");
}

}  // namespace pursuit
