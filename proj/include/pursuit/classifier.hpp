#pragma once

/**
 * @file classifier.hpp
 * @brief Regime classification with explicit certificates.
 *
 * A configuration is in the evasion regime exactly when the dual cone
 * {p : (z_i, p) >= 0 for all i} of the initial displacements z_i = y0 - x_i0
 * contains a nonzero vector; any such vector, normalized, is an evasion
 * witness. When the cone is trivial, every direction has some pursuer strictly
 * behind the evader and the pursuit guarantee applies. The two regimes are
 * exact complements.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pursuit/scenario.hpp"
#include "pursuit/simplex.hpp"
#include "pursuit/vec.hpp"

namespace pursuit {

enum class Regime { Pursuit, Evasion };

inline const char* regime_name(Regime r) {
    return r == Regime::Pursuit ? "pursuit" : "evasion";
}

struct RegimeCertificate {
    Regime regime = Regime::Pursuit;
    std::optional<Vec> witness;  ///< unit p with (z_i, p) >= -1e-9, present iff Evasion
    bool strict = false;         ///< min_i (z_i, p) > 0
    std::size_t rank = 0;        ///< rank of span{z_i}
    std::size_t lp_iterations = 0;
    double margin = 0.0;  ///< min_i (z_i, witness) when Evasion; oracle max-min otherwise
};

/// Feasibility margin below which witnesses are not trusted.
inline constexpr double kWitnessTol = 1e-9;

namespace detail {

inline double min_alignment(const std::vector<Vec>& zs, const Vec& p) {
    double m = std::numeric_limits<double>::infinity();
    for (const Vec& z : zs) m = std::min(m, inner(z, p));
    return m;
}

/// Decode p = a - b from the stacked LP variables [a(n), b(n), ...].
inline Vec decode_p(const std::vector<double>& x, std::size_t n) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = x[i] - x[n + i];
    return Vec(std::move(c));
}

}  // namespace detail

/// Searches the dual cone of Z for a nonzero element. Callers are expected to
/// have handled rank deficiency already (then a witness exists trivially).
///
/// First LP: max t s.t. (z_i, p) >= t, p in [-1,1]^n. A positive optimum gives
/// a strict witness. If the optimum is ~0, the cone may still have a nonzero
/// boundary element, so 2n face-probing LPs max +-p_k over the cone are tried.
/// Free variables are split as p = a - b and t = s - w with a, b in [0,1]^n so
/// every right-hand side is zero or one and the all-slack basis is feasible.
inline std::optional<Vec> dual_cone_witness(const std::vector<Vec>& zs,
                                            std::size_t* iterations_out = nullptr) {
    const std::size_t n = zs.front().dim();
    const std::size_t m = zs.size();
    std::size_t iterations = 0;

    // max t subject to t - (z_i, p) <= 0 and a, b <= 1.
    {
        LpProblem lp;
        lp.c.assign(2 * n + 2, 0.0);
        lp.c[2 * n] = 1.0;       // s
        lp.c[2 * n + 1] = -1.0;  // w
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> row(2 * n + 2, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                row[k] = -zs[i][k];
                row[n + k] = zs[i][k];
            }
            row[2 * n] = 1.0;
            row[2 * n + 1] = -1.0;
            lp.a.push_back(std::move(row));
            lp.b.push_back(0.0);
        }
        for (std::size_t k = 0; k < 2 * n; ++k) {
            std::vector<double> row(2 * n + 2, 0.0);
            row[k] = 1.0;
            lp.a.push_back(std::move(row));
            lp.b.push_back(1.0);
        }
        LpSolution sol = solve_lp(lp);
        iterations += sol.iterations;
        if (!sol.bounded) throw InternalError("dual_cone_witness: unbounded interior LP");
        if (sol.value > kWitnessTol) {
            if (iterations_out) *iterations_out = iterations;
            return unitize(detail::decode_p(sol.x, n));
        }
    }

    // Face probing: max +-p_k over {p : (z_i, p) >= 0, p in [-1,1]^n}.
    for (std::size_t k = 0; k < n; ++k) {
        for (double sign : {1.0, -1.0}) {
            LpProblem lp;
            lp.c.assign(2 * n, 0.0);
            lp.c[k] = sign;
            lp.c[n + k] = -sign;
            for (std::size_t i = 0; i < m; ++i) {
                std::vector<double> row(2 * n, 0.0);
                for (std::size_t j = 0; j < n; ++j) {
                    row[j] = -zs[i][j];
                    row[n + j] = zs[i][j];
                }
                lp.a.push_back(std::move(row));
                lp.b.push_back(0.0);
            }
            for (std::size_t j = 0; j < 2 * n; ++j) {
                std::vector<double> row(2 * n, 0.0);
                row[j] = 1.0;
                lp.a.push_back(std::move(row));
                lp.b.push_back(1.0);
            }
            LpSolution sol = solve_lp(lp);
            iterations += sol.iterations;
            if (!sol.bounded) throw InternalError("dual_cone_witness: unbounded face LP");
            if (sol.value > kWitnessTol) {
                if (iterations_out) *iterations_out = iterations;
                return unitize(detail::decode_p(sol.x, n));
            }
        }
    }
    if (iterations_out) *iterations_out = iterations;
    return std::nullopt;
}

/// Classifies a validated frame. Rank-deficient displacement sets short-circuit
/// to Evasion via an orthogonal-complement witness; full-rank sets go through
/// the dual-cone LPs.
inline RegimeCertificate classify(const PursuitFrame& frame) {
    RegimeCertificate cert;
    const auto onb = orthonormal_basis_and_rank(frame.displacements);
    cert.rank = onb.rank;

    if (onb.rank < frame.dim) {
        cert.regime = Regime::Evasion;
        cert.witness = complement_direction(onb, frame.dim);
        if (!cert.witness) throw InternalError("classify: complement direction not found");
        cert.margin = detail::min_alignment(frame.displacements, *cert.witness);
        cert.strict = cert.margin > kWitnessTol;
        return cert;
    }

    auto witness = dual_cone_witness(frame.displacements, &cert.lp_iterations);
    if (witness) {
        cert.regime = Regime::Evasion;
        cert.margin = detail::min_alignment(frame.displacements, *witness);
        cert.strict = cert.margin > kWitnessTol;
        cert.witness = std::move(witness);
    } else {
        cert.regime = Regime::Pursuit;
    }
    return cert;
}

/// Brute-force cross-check for dims 1-3: walk a grid over the unit sphere and
/// look for a direction with min_i (z_i, p) >= 0. The returned margin is the
/// best max-min value seen, so callers can filter near-degenerate instances
/// where the grid is inconclusive.
inline RegimeCertificate sampling_oracle(const PursuitFrame& frame, double resolution = 1e-3) {
    const std::size_t n = frame.dim;
    if (n > 3) throw UsageError("sampling_oracle: only dims 1-3 supported");

    RegimeCertificate cert;
    cert.rank = orthonormal_basis_and_rank(frame.displacements).rank;
    double best = -std::numeric_limits<double>::infinity();
    std::optional<Vec> best_p;

    auto consider = [&](const Vec& p) {
        const double m = detail::min_alignment(frame.displacements, p);
        if (m > best) {
            best = m;
            best_p = p;
        }
    };

    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 1) {
        consider(Vec{1.0});
        consider(Vec{-1.0});
    } else if (n == 2) {
        for (double a = 0.0; a < two_pi; a += resolution) {
            consider(Vec{std::cos(a), std::sin(a)});
        }
    } else {
        for (double th = 0.0; th <= std::numbers::pi + 1e-15; th += resolution) {
            const double st = std::sin(th);
            const double ct = std::cos(th);
            for (double ph = 0.0; ph < two_pi; ph += resolution) {
                consider(Vec{st * std::cos(ph), st * std::sin(ph), ct});
                if (st == 0.0) break;  // pole: one sample suffices
            }
        }
    }

    cert.margin = best;
    if (best >= 0.0) {
        cert.regime = Regime::Evasion;
        cert.witness = best_p;
        cert.strict = best > kWitnessTol;
    } else {
        cert.regime = Regime::Pursuit;
    }
    return cert;
}

inline nlohmann::json certificate_to_json(const RegimeCertificate& cert) {
    nlohmann::json j;
    j["regime"] = regime_name(cert.regime);
    j["witness"] = cert.witness ? nlohmann::json(cert.witness->coords()) : nlohmann::json(nullptr);
    j["strict"] = cert.strict;
    j["rank"] = cert.rank;
    return j;
}

}  // namespace pursuit
