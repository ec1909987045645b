#pragma once

/**
 * @file scenario.hpp
 * @brief Game instances: initial positions, validation, JSON (de)serialization.
 */

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pursuit/errors.hpp"
#include "pursuit/vec.hpp"

namespace pursuit {

/// Initial data of one game: m pursuer positions and one evader position,
/// all in the same ambient dimension. Strategy/control choices live elsewhere
/// so an instance stays reusable across experiments.
struct Scenario {
    std::size_t dim = 0;
    std::vector<Vec> pursuers;  ///< x_i(0), i = 1..m
    Vec evader;                 ///< y(0)
    std::vector<std::string> labels;  ///< optional, per pursuer

    std::size_t pursuer_count() const { return pursuers.size(); }
};

/// Derived quantities of a validated scenario. directions[i] is the unit vector
/// from pursuer i toward the evader at t = 0; gaps[i] is the initial distance.
struct PursuitFrame {
    std::size_t dim = 0;
    std::vector<Vec> displacements;  ///< z_i = y0 - x_i0
    std::vector<Vec> directions;     ///< e_i = z_i / ||z_i||, unit
    std::vector<double> gaps;        ///< omega_i(0) = ||z_i|| > 0
    double total_gap = 0.0;          ///< omega(0) = sum_i omega_i(0)

    std::size_t pursuer_count() const { return displacements.size(); }
};

/// Positions closer than this are treated as coincident (the pursuit direction
/// would be a division by ~0).
inline constexpr double kCoincidenceTol = 1e-12;

/// Checks the scenario and computes its frame. Throws DegenerateError when the
/// evader starts on top of a pursuer, UsageError on dimension mismatches.
inline PursuitFrame validate(const Scenario& s) {
    if (s.pursuers.empty()) throw UsageError("scenario: needs at least one pursuer");
    if (s.evader.dim() != s.dim) throw UsageError("scenario: evader dimension mismatch");
    PursuitFrame f;
    f.dim = s.dim;
    for (std::size_t i = 0; i < s.pursuers.size(); ++i) {
        const Vec& x0 = s.pursuers[i];
        if (x0.dim() != s.dim) {
            throw UsageError("scenario: pursuer " + std::to_string(i + 1) + " dimension mismatch");
        }
        Vec z = s.evader - x0;
        const double gap = norm(z);
        if (gap <= kCoincidenceTol) {
            throw DegenerateError("scenario: pursuer " + std::to_string(i + 1) +
                                  " coincides with the evader");
        }
        f.directions.push_back(z * (1.0 / gap));
        f.displacements.push_back(std::move(z));
        f.gaps.push_back(gap);
        f.total_gap += gap;
    }
    return f;
}

namespace detail {

inline Vec vec_from_json(const nlohmann::json& j, std::size_t expected_dim,
                         const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
    std::vector<double> c;
    c.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ParseError(what + ": non-numeric entry");
        c.push_back(x.get<double>());
        if (!std::isfinite(c.back())) throw ParseError(what + ": non-finite entry");
    }
    if (c.size() != expected_dim) {
        throw ParseError(what + ": expected " + std::to_string(expected_dim) +
                         " coordinates, got " + std::to_string(c.size()));
    }
    return Vec(std::move(c));
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("scenario: top level must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
        throw ParseError("scenario: \"dim\" must be a positive integer");
    }
    Scenario s;
    s.dim = j["dim"].get<std::size_t>();
    if (!j.contains("evader")) throw ParseError("scenario: missing \"evader\"");
    s.evader = detail::vec_from_json(j["evader"], s.dim, "evader");
    if (!j.contains("pursuers") || !j["pursuers"].is_array() || j["pursuers"].empty()) {
        throw ParseError("scenario: \"pursuers\" must be a non-empty array");
    }
    std::size_t i = 0;
    for (const auto& p : j["pursuers"]) {
        s.pursuers.push_back(detail::vec_from_json(p, s.dim, "pursuers[" + std::to_string(i) + "]"));
        ++i;
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_array() || j["labels"].size() != s.pursuers.size()) {
            throw ParseError("scenario: \"labels\" must match the pursuer count");
        }
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) throw ParseError("scenario: labels must be strings");
            s.labels.push_back(l.get<std::string>());
        }
    }
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    j["evader"] = s.evader.coords();
    auto ps = nlohmann::json::array();
    for (const Vec& p : s.pursuers) ps.push_back(p.coords());
    j["pursuers"] = std::move(ps);
    if (!s.labels.empty()) j["labels"] = s.labels;
    return j;
}

inline Scenario load_scenario_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("scenario: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario_text(ss.str());
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("scenario: cannot write " + path);
    out << scenario_to_json(s).dump(2) << '\n';
}

}  // namespace pursuit
