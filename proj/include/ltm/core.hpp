#pragma once

// Toral linked twist map: a vertical shear on the strip 0 <= x <= alpha
// followed by a horizontal shear on the strip 0 <= y <= beta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "ltm/error.hpp"
#include "ltm/linalg.hpp"

namespace ltm {

/// Singular-set guard: torus distance below which a point counts as lying
/// on a region boundary.
inline constexpr double eps_sing = 1e-10;

/// Reduce to the half-open fundamental domain [0, 1). Exact 1.0 maps to 0.0.
inline double wrap01(double v) {
    double r = v - std::floor(v);
    if (r >= 1.0) r = 0.0;
    return r == 0.0 ? 0.0 : r;  // folds -0.0
}

/// Shortest distance between two values on the unit circle.
inline double circle_distance(double a, double b) {
    const double d = std::abs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

enum class Rotation { counter_rotating, co_rotating };

class LtmParams {
public:
    LtmParams(double alpha, double beta, std::int64_t k, std::int64_t ell)
        : alpha_(alpha), beta_(beta), k_(k), ell_(ell) {
        if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
            throw error(errc::invalid_params, "strip widths must lie in (0, 1]");
        }
        if (k == 0 || ell == 0) {
            throw error(errc::invalid_params, "shear strengths k and ell must be nonzero");
        }
    }

    /// The generalized cat map with uniform stretching: alpha = beta = 1.
    static LtmParams cat_map(std::int64_t k = 1, std::int64_t ell = 1) { return {1.0, 1.0, k, ell}; }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::int64_t k() const { return k_; }
    std::int64_t ell() const { return ell_; }
    double kappa() const { return static_cast<double>(k_) / alpha_; }
    double lambda() const { return static_cast<double>(ell_) / beta_; }

    Rotation rotation() const {
        return (k_ > 0) == (ell_ > 0) ? Rotation::counter_rotating : Rotation::co_rotating;
    }
    bool counter_rotating() const { return rotation() == Rotation::counter_rotating; }
    bool co_rotating() const { return rotation() == Rotation::co_rotating; }

    /// Counter-rotating, or co-rotating with kappa * lambda < -4 (L hyperbolic).
    bool hyperbolic() const { return counter_rotating() || kappa() * lambda() < -4.0; }

    bool operator==(const LtmParams&) const = default;

private:
    double alpha_;
    double beta_;
    std::int64_t k_;
    std::int64_t ell_;
};

inline std::string describe(const LtmParams& p) {
    return "alpha=" + std::to_string(p.alpha()) + " beta=" + std::to_string(p.beta()) +
           " k=" + std::to_string(p.k()) + " ell=" + std::to_string(p.ell());
}

/// A point of the flat torus, always stored reduced mod 1.
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(double x, double y) : x_(wrap01(x)), y_(wrap01(y)) {}
    explicit TorusPoint(Vec2 v) : TorusPoint(v.x, v.y) {}

    double x() const { return x_; }
    double y() const { return y_; }
    Vec2 vec() const { return {x_, y_}; }

    bool operator==(const TorusPoint&) const = default;

private:
    double x_ = 0.0;
    double y_ = 0.0;
};

enum class Region { RV, RH, RL, Outside };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::RV: return "RV";
        case Region::RH: return "RH";
        case Region::RL: return "RL";
        case Region::Outside: return "Outside";
    }
    return "?";
}

struct ShearMatrices {
    Mat2 V;
    Mat2 H;
    Mat2 L;
};

inline ShearMatrices shear_matrices(const LtmParams& p) {
    const double kap = p.kappa();
    const double lam = p.lambda();
    const Mat2 V{1.0, 0.0, kap, 1.0};
    const Mat2 H{1.0, lam, 0.0, 1.0};
    return {V, H, H * V};
}

inline Mat2 region_matrix(const LtmParams& p, Region r) {
    const auto m = shear_matrices(p);
    switch (r) {
        case Region::RV: return m.V;
        case Region::RH: return m.H;
        case Region::RL: return m.L;
        case Region::Outside: break;
    }
    return Mat2::identity();
}

namespace detail {

/// Height of the vertical-shear image, (y + kappa x) mod 1.
inline double sheared_height(const LtmParams& p, double x, double y) {
    return wrap01(y + x * p.kappa());
}

inline bool in_vertical_strip(const LtmParams& p, double x) { return x <= p.alpha(); }
inline bool in_horizontal_strip(const LtmParams& p, double y) { return y <= p.beta(); }

}  // namespace detail

inline Region classify_region(const LtmParams& p, const TorusPoint& z) {
    const double x = z.x();
    const double y = z.y();
    if (detail::in_vertical_strip(p, x)) {
        const double h = detail::sheared_height(p, x, y);
        return h <= p.beta() ? Region::RL : Region::RV;
    }
    return detail::in_horizontal_strip(p, y) ? Region::RH : Region::Outside;
}

namespace detail {

/// The map extended by the identity off R. It is continuous on the whole
/// torus, which the line advection relies on for vertices on boundaries.
inline TorusPoint forward_extended(const LtmParams& p, const TorusPoint& z) {
    double x = z.x();
    double y = z.y();
    if (in_vertical_strip(p, x)) y = sheared_height(p, x, y);
    if (in_horizontal_strip(p, y)) x = wrap01(x + y * p.lambda());
    return {x, y};
}

struct BackwardStep {
    TorusPoint point;
    bool undid_horizontal = false;
    bool undid_vertical = false;
};

/// One step of the inverse map: H^-1 on the horizontal strip, then V^-1 on
/// the vertical strip. Each shear preserves the coordinate that selects it,
/// so the case analysis inverts forward exactly.
inline BackwardStep backward_step(const LtmParams& p, const TorusPoint& z) {
    BackwardStep s;
    double x = z.x();
    double y = z.y();
    if (in_horizontal_strip(p, y)) {
        x = wrap01(x - y * p.lambda());
        s.undid_horizontal = true;
    }
    if (in_vertical_strip(p, x)) {
        y = wrap01(y - x * p.kappa());
        s.undid_vertical = true;
    }
    s.point = TorusPoint(x, y);
    return s;
}

inline void require_in_domain(const LtmParams& p, const TorusPoint& z) {
    if (classify_region(p, z) == Region::Outside) {
        throw error(errc::outside_domain, "point (" + std::to_string(z.x()) + ", " +
                                              std::to_string(z.y()) + ") is not in R");
    }
}

inline double point_segment_distance(Vec2 q, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(q - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(q - (a + ab * t));
}

/// Region of the point of R nearest to z, for z in the outside square
/// x > alpha, y > beta. Throws when that point is farther than `slack`.
inline Region nearest_region(const LtmParams& p, const TorusPoint& z, double slack) {
    const double to_top = z.y() - p.beta();
    const double to_right = 1.0 - z.x();
    const double to_left = z.x() - p.alpha();
    TorusPoint snapped;
    double d;
    if (to_top <= to_right && to_top <= to_left) {
        d = to_top;
        snapped = TorusPoint(z.x(), p.beta());
    } else if (to_right <= to_left) {
        d = to_right;
        snapped = TorusPoint(0.0, z.y());
    } else {
        d = to_left;
        snapped = TorusPoint(p.alpha(), z.y());
    }
    if (d > slack) {
        throw error(errc::outside_domain, "point (" + std::to_string(z.x()) + ", " +
                                              std::to_string(z.y()) + ") is not in R");
    }
    return classify_region(p, snapped);
}

}  // namespace detail

/// V z, H z or L z (mod 1) according to the region of z.
inline TorusPoint forward(const LtmParams& p, const TorusPoint& z) {
    detail::require_in_domain(p, z);
    return detail::forward_extended(p, z);
}

inline TorusPoint backward(const LtmParams& p, const TorusPoint& z) {
    detail::require_in_domain(p, z);
    return detail::backward_step(p, z).point;
}

/// Torus distance from z to the nearest line that separates two different
/// regions. Families that separate nothing (e.g. every line of the cat map)
/// are skipped; with no boundaries at all the result is +infinity.
inline double boundary_distance(const LtmParams& p, const TorusPoint& z) {
    const double x = z.x();
    const double y = z.y();
    const double alpha = p.alpha();
    const double beta = p.beta();
    double best = std::numeric_limits<double>::infinity();

    if (alpha < 1.0) {
        best = std::min({best, circle_distance(x, 0.0), circle_distance(x, alpha)});
        if (beta < 1.0) {
            // y = 0 and y = beta for x in [alpha, 1] separate RH from Outside
            const double dx = x < alpha ? std::min(alpha - x, x) : 0.0;
            for (double c : {0.0, beta}) {
                best = std::min(best, std::hypot(dx, circle_distance(y, c)));
            }
        }
    }

    if (beta < 1.0) {
        // y + kappa x = c + j for x in [0, alpha] separates RL from RV
        const double kap = p.kappa();
        const auto reach = static_cast<std::int64_t>(std::ceil(std::abs(kap) * alpha)) + 1;
        for (double xs : {x - 1.0, x, x + 1.0}) {
            for (double c : {0.0, beta}) {
                const auto j0 = static_cast<std::int64_t>(std::floor(y + kap * xs - c));
                for (std::int64_t j = j0 - reach; j <= j0 + reach + 1; ++j) {
                    const double c0 = c + static_cast<double>(j);
                    const Vec2 a{0.0, c0};
                    const Vec2 b{alpha, c0 - kap * alpha};
                    best = std::min(best, detail::point_segment_distance({xs, y}, a, b));
                }
            }
        }
    }
    return best;
}

/// Tangent map at z: V, H or L. Undefined on the singular set.
inline Mat2 jacobian(const LtmParams& p, const TorusPoint& z) {
    const Region r = classify_region(p, z);
    if (r == Region::Outside) {
        throw error(errc::outside_domain, "jacobian requested outside R");
    }
    if (boundary_distance(p, z) < eps_sing) {
        throw error(errc::on_boundary, "tangent map undefined on a region boundary");
    }
    return region_matrix(p, r);
}

}  // namespace ltm
