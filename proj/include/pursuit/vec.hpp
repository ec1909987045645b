#pragma once

/**
 * @file vec.hpp
 * @brief Dense finite-dimensional vectors and the small amount of linear
 *        algebra the rest of the library needs.
 *
 * The game is posed in a sequence space, but with finitely many players every
 * quantity of interest (strategies, gap rates, regime certificates) depends on
 * the controls only through inner products with the finitely many initial
 * displacement directions. The whole game therefore evolves inside the span of
 * those directions, and representing vectors as dense coordinate lists in a
 * user-declared ambient dimension n is exact, not an approximation.
 *
 * All values are immutable after construction and safe to share across threads.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

/// Absolute tolerance for algebraic identities (unit norms, collinearity).
inline constexpr double kTightTol = 1e-12;
/// Default absolute tolerance for equality comparisons.
inline constexpr double kDefaultTol = 1e-9;

/// A point or direction in R^n. Coordinates must all be finite.
class Vec {
  public:
    Vec() = default;

    explicit Vec(std::vector<double> coords) : coords_(std::move(coords)) {
        check_finite();
    }

    Vec(std::initializer_list<double> coords) : coords_(coords) { check_finite(); }

    /// Zero vector of dimension n.
    static Vec zero(std::size_t n) { return Vec(std::vector<double>(n, 0.0)); }

    /// Standard basis vector e_axis in dimension n.
    static Vec axis(std::size_t n, std::size_t axis) {
        std::vector<double> c(n, 0.0);
        c.at(axis) = 1.0;
        return Vec(std::move(c));
    }

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    bool operator==(const Vec& other) const = default;

    Vec operator+(const Vec& r) const {
        require_same_dim(r, "operator+");
        std::vector<double> c(coords_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += r.coords_[i];
        return Vec(std::move(c));
    }

    Vec operator-(const Vec& r) const {
        require_same_dim(r, "operator-");
        std::vector<double> c(coords_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= r.coords_[i];
        return Vec(std::move(c));
    }

    Vec operator*(double s) const {
        std::vector<double> c(coords_);
        for (double& x : c) x *= s;
        return Vec(std::move(c));
    }

    Vec operator-() const { return *this * -1.0; }

    void require_same_dim(const Vec& other, const char* where) const {
        if (dim() != other.dim()) {
            throw UsageError(std::string(where) + ": dimension mismatch (" +
                             std::to_string(dim()) + " vs " + std::to_string(other.dim()) + ")");
        }
    }

  private:
    void check_finite() const {
        for (double x : coords_) {
            if (!std::isfinite(x)) throw UsageError("Vec: non-finite coordinate");
        }
    }

    std::vector<double> coords_;
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

/// Euclidean inner product. Both arguments must share the dimension.
inline double inner(const Vec& a, const Vec& b) {
    a.require_same_dim(b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

/// Euclidean norm.
inline double norm(const Vec& a) { return std::sqrt(inner(a, a)); }

/// a / ||a||. Throws DegenerateError for the zero vector.
inline Vec unitize(const Vec& a) {
    const double n = norm(a);
    if (n <= 0.0) throw DegenerateError("unitize: zero vector has no direction");
    return a * (1.0 / n);
}

/// Componentwise max-abs difference; infinity on dimension mismatch is an error.
inline double max_abs_diff(const Vec& a, const Vec& b) {
    a.require_same_dim(b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct OrthonormalBasis {
    std::vector<Vec> basis;  ///< pairwise orthonormal, spans span(inputs)
    std::size_t rank = 0;    ///< == basis.size()
};

/// Modified Gram-Schmidt with a rank tolerance. Inputs must share a dimension.
inline OrthonormalBasis orthonormal_basis_and_rank(const std::vector<Vec>& vs,
                                                   double tol = 1e-10) {
    OrthonormalBasis out;
    for (const Vec& v : vs) {
        if (!out.basis.empty()) v.require_same_dim(out.basis.front(), "orthonormal_basis_and_rank");
        Vec r = v;
        // Two projection passes for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& b : out.basis) r = r - b * inner(r, b);
        }
        if (norm(r) > tol * std::max(1.0, norm(v))) {
            out.basis.push_back(unitize(r));
        }
    }
    out.rank = out.basis.size();
    return out;
}

/// A unit vector orthogonal to every vector in `basis` (an orthonormal set in
/// dimension n), or nullopt when the set already spans R^n.
inline std::optional<Vec> complement_direction(const OrthonormalBasis& onb, std::size_t n,
                                               double tol = 1e-10) {
    if (onb.rank >= n) return std::nullopt;
    for (std::size_t axis = 0; axis < n; ++axis) {
        Vec r = Vec::axis(n, axis);
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& b : onb.basis) r = r - b * inner(r, b);
        }
        if (norm(r) > tol) return unitize(r);
    }
    return std::nullopt;  // unreachable for a genuine orthonormal set with rank < n
}

}  // namespace pursuit
