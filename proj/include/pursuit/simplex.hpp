#pragma once

/**
 * @file simplex.hpp
 * @brief Dense tableau simplex for the small LPs the classifier needs.
 *
 * Solves  max c^T x  subject to  Ax <= b, x >= 0  with b >= 0, so the all-slack
 * basis is feasible and no phase-1 is required. Entering and leaving variables
 * follow Bland's rule, which rules out cycling on the (heavily degenerate)
 * cone-feasibility LPs. Problem sizes here are tens of rows/columns; a dense
 * tableau is the simplest correct tool.
 */

#include <cstddef>
#include <limits>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

struct LpProblem {
    std::vector<std::vector<double>> a;  ///< m x n constraint matrix
    std::vector<double> b;               ///< length m, all entries >= 0
    std::vector<double> c;               ///< length n objective (maximized)
};

struct LpSolution {
    double value = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
    bool bounded = true;
};

inline LpSolution solve_lp(const LpProblem& p, double tol = 1e-9,
                           std::size_t max_iterations = 20000) {
    const std::size_t m = p.a.size();
    const std::size_t n = p.c.size();
    for (double bi : p.b) {
        if (bi < 0.0) throw UsageError("solve_lp: requires b >= 0");
    }

    // Tableau: m constraint rows over [structural | slack | rhs], plus a
    // reduced-cost row. Basis starts as the slacks.
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
    std::vector<double> cost(cols, 0.0);
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) t[r][j] = p.a[r][j];
        t[r][n + r] = 1.0;
        t[r][cols - 1] = p.b[r];
        basis[r] = n + r;
    }
    for (std::size_t j = 0; j < n; ++j) cost[j] = p.c[j];

    LpSolution sol;
    for (sol.iterations = 0; sol.iterations < max_iterations; ++sol.iterations) {
        // Bland: entering = lowest-index column with positive reduced cost.
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (cost[j] > tol) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;  // optimal

        // Ratio test; ties broken by lowest basic-variable index (Bland).
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            if (t[r][enter] > tol) {
                const double ratio = t[r][cols - 1] / t[r][enter];
                if (ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol && (leave == m || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == m) {
            sol.bounded = false;
            return sol;
        }

        // Pivot on (leave, enter).
        const double piv = t[leave][enter];
        for (double& x : t[leave]) x /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = t[r][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[r][j] -= f * t[leave][j];
        }
        const double fc = cost[enter];
        for (std::size_t j = 0; j < cols; ++j) cost[j] -= fc * t[leave][j];
        basis[leave] = enter;
    }
    if (sol.iterations >= max_iterations) {
        throw InternalError("solve_lp: iteration guard exceeded");
    }

    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) sol.x[basis[r]] = t[r][cols - 1];
    }
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += p.c[j] * sol.x[j];
    return sol;
}

}  // namespace pursuit
