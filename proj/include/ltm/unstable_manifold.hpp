#pragma once

// Unstable-manifold slopes from backward itineraries, and the invariant
// cones that bound them.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/linalg.hpp"

namespace ltm {

inline constexpr double tol_cf = 1e-12;
inline constexpr int depth_max = 200;

/// Start vector for the pushforward oracle; a generic direction that is
/// never exactly stable.
inline constexpr Vec2 oracle_start_vector{1.0, 0.37};

enum class Letter { H, V };

struct RunPair {
    int m = 0;  // V-run m_i
    int n = 0;  // following H-run n_{i+1}; 0 when the code ends on m_i
    bool operator==(const RunPair&) const = default;
};

struct TailRun {
    Letter letter = Letter::H;
    int count = 0;
};

/// Run-length itinerary of a backward orbit: H^-n1, V^-m1, H^-n2, ...
///
/// `runs` holds the completed runs in order (n1, m1, n2, m2, ...), with
/// n1 = 0 when the first inverse step is V^-1. The final run may still grow
/// at a larger depth and is kept apart as the tail.
struct BackwardCode {
    std::vector<int> runs;
    std::optional<TailRun> tail;
    int depth = 0;

    /// Leading H-run; 0 iff the base point is off the horizontal strip.
    int n1() const {
        if (!runs.empty()) return runs[0];
        return tail && tail->letter == Letter::H ? tail->count : 0;
    }

    std::vector<RunPair> pairs() const {
        std::vector<RunPair> out;
        for (std::size_t i = 1; i < runs.size(); i += 2) {
            out.push_back({runs[i], i + 1 < runs.size() ? runs[i + 1] : 0});
        }
        return out;
    }

    std::size_t complete_runs() const { return runs.size(); }

    /// Append one letter, closing the tail run if the letter changes.
    void push(Letter l) {
        if (!tail) {
            if (runs.empty() && l == Letter::V) runs.push_back(0);
            tail = TailRun{l, 1};
        } else if (tail->letter == l) {
            ++tail->count;
        } else {
            runs.push_back(tail->count);
            tail = TailRun{l, 1};
        }
    }
};

namespace detail {

inline void require_non_singular(const LtmParams& p, const TorusPoint& z, int step) {
    if (boundary_distance(p, z) < eps_sing) {
        throw error(errc::singular_orbit, "backward orbit step " + std::to_string(step) +
                                              " lies on a region boundary");
    }
}

inline void require_co_rotating_hyperbolic(const LtmParams& p) {
    if (!p.co_rotating() || !(p.kappa() * p.lambda() < -4.0)) {
        throw error(errc::non_hyperbolic_params,
                    "requires a co-rotating map with kappa*lambda < -4 (" + describe(p) + ")");
    }
    if (p.k() < 0) {
        throw error(errc::invalid_params, "cone analysis assumes k > 0");
    }
}

}  // namespace detail

/// Iterate z backwards `depth` times, recording the inverse shears applied.
inline BackwardCode backward_code(const LtmParams& p, const TorusPoint& z, int depth) {
    if (depth < 1) throw error(errc::invalid_params, "depth must be at least 1");
    detail::require_in_domain(p, z);
    detail::require_non_singular(p, z, 0);
    BackwardCode code;
    TorusPoint cur = z;
    for (int i = 1; i <= depth; ++i) {
        const auto step = detail::backward_step(p, cur);
        if (step.undid_horizontal) code.push(Letter::H);
        if (step.undid_vertical) code.push(Letter::V);
        cur = step.point;
        detail::require_non_singular(p, cur, i);
    }
    code.depth = depth;
    return code;
}

/// Finite convergent 1/(lambda n1 + 1/(kappa m1 + 1/(lambda n2 + ...))) over
/// the completed runs, evaluated from the innermost term outwards. With
/// n1 = 0 this is kappa m1 + 1/(lambda n2 + ...).
inline double slope_continued_fraction(const LtmParams& p, const BackwardCode& code) {
    const auto& runs = code.runs;
    if (runs.size() < 2) {
        throw error(errc::insufficient_data, "continued fraction needs n1 and m1 completed");
    }
    auto term = [&](std::size_t i) {
        return (i % 2 == 0 ? p.lambda() : p.kappa()) * static_cast<double>(runs[i]);
    };
    const std::size_t stop = runs[0] == 0 ? 1 : 0;
    double t = 0.0;
    for (std::size_t i = runs.size(); i-- > stop + 1;) {
        const double den = term(i) + t;
        if (den == 0.0) throw error(errc::zero_denominator, "continued fraction denominator vanished");
        t = 1.0 / den;
    }
    if (stop == 1) return term(1) + t;
    const double den = term(0) + t;
    if (den == 0.0) throw error(errc::zero_denominator, "continued fraction denominator vanished");
    return 1.0 / den;
}

/// The same convergent in the equivalent form c1/(1 + c2/(1 + c3/(1 + ...)))
/// with c1 = 1/(lambda n1) and c_i the reciprocal product of neighbouring
/// terms. For kappa*lambda < -4 every c_i after the first is below 1/4.
struct TransformedFraction {
    double offset = 0.0;             // kappa m1 when n1 = 0, else 0
    std::vector<double> numerators;  // c1, c2, ...
    double value = 0.0;
};

inline TransformedFraction transformed_fraction(const LtmParams& p, const BackwardCode& code) {
    const auto& runs = code.runs;
    if (runs.size() < 2) {
        throw error(errc::insufficient_data, "continued fraction needs n1 and m1 completed");
    }
    std::vector<double> terms;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        terms.push_back((i % 2 == 0 ? p.lambda() : p.kappa()) * static_cast<double>(runs[i]));
    }
    TransformedFraction out;
    std::size_t first = 0;
    if (runs[0] == 0) {
        out.offset = terms[1];
        first = 2;
    }
    for (std::size_t i = first; i < terms.size(); ++i) {
        out.numerators.push_back(i == first ? 1.0 / terms[i] : 1.0 / (terms[i - 1] * terms[i]));
    }
    double t = 0.0;
    for (std::size_t i = out.numerators.size(); i-- > 0;) t = out.numerators[i] / (1.0 + t);
    out.value = out.offset + t;
    return out;
}

/// Slope at z of a generic vector pushed forward from M^-depth(z) through
/// the region Jacobians along the orbit.
inline double slope_pushforward_oracle(const LtmParams& p, const TorusPoint& z, int depth) {
    if (depth < 1) throw error(errc::invalid_params, "depth must be at least 1");
    detail::require_in_domain(p, z);
    detail::require_non_singular(p, z, 0);
    std::vector<TorusPoint> orbit{z};
    for (int i = 1; i <= depth; ++i) orbit.push_back(backward(p, orbit.back()));
    Vec2 w = oracle_start_vector;
    for (int i = depth; i >= 1; --i) {
        Mat2 J;
        try {
            J = jacobian(p, orbit[static_cast<std::size_t>(i)]);
        } catch (const error& e) {
            if (e.code() != errc::on_boundary) throw;
            throw error(errc::singular_orbit, "pushforward orbit touches a region boundary");
        }
        w = J * w;
        w = w * (1.0 / norm(w));
    }
    if (std::abs(w.x) < 1e-300) throw error(errc::degenerate_vector, "pushed vector is vertical");
    return w.y / w.x;
}

struct SlopeSample {
    TorusPoint point;
    double slope = 0.0;  // NaN when no run completed within depth_max
    int depth_used = 0;
    bool converged = false;
};

/// Deepen the backward code until successive convergents agree to tol_cf
/// (relative for slopes beyond 1) or depth_max is reached.
inline SlopeSample unstable_slope(const LtmParams& p, const TorusPoint& z) {
    if (!p.hyperbolic()) {
        throw error(errc::non_hyperbolic_params,
                    "co-rotating maps need kappa*lambda < -4 (" + describe(p) + ")");
    }
    detail::require_in_domain(p, z);
    detail::require_non_singular(p, z, 0);

    SlopeSample out;
    out.point = z;
    out.slope = std::numeric_limits<double>::quiet_NaN();  // until a first convergent exists
    BackwardCode code;
    TorusPoint cur = z;
    std::size_t evaluated_runs = 0;
    std::optional<double> previous;
    for (int d = 1; d <= depth_max; ++d) {
        const auto step = detail::backward_step(p, cur);
        if (step.undid_horizontal) code.push(Letter::H);
        if (step.undid_vertical) code.push(Letter::V);
        cur = step.point;
        detail::require_non_singular(p, cur, d);
        code.depth = d;
        if (code.complete_runs() < 2 || code.complete_runs() == evaluated_runs) continue;
        evaluated_runs = code.complete_runs();
        const double s = slope_continued_fraction(p, code);
        out.slope = s;
        out.depth_used = d;
        if (previous && std::abs(s - *previous) < tol_cf * std::max(1.0, std::abs(s))) {
            out.converged = true;
            return out;
        }
        previous = s;
    }
    return out;
}

enum class SampleStatus { converged, not_converged, singular };

inline const char* to_string(SampleStatus s) {
    switch (s) {
        case SampleStatus::converged: return "true";
        case SampleStatus::not_converged: return "false";
        case SampleStatus::singular: return "singular";
    }
    return "?";
}

struct SlopeFieldRow {
    double x = 0.0;
    double y = 0.0;
    double slope = 0.0;
    SampleStatus status = SampleStatus::singular;
    int depth = 0;
};

/// unstable_slope at the centres of an N x N grid of cells, row by row from
/// y = 0. Points off R are skipped; singular points are kept and flagged.
inline std::vector<SlopeFieldRow> sample_slope_field(const LtmParams& p, int grid) {
    if (grid < 2) throw error(errc::invalid_params, "slope-field grid must be at least 2x2");
    if (!p.hyperbolic()) {
        throw error(errc::non_hyperbolic_params,
                    "co-rotating maps need kappa*lambda < -4 (" + describe(p) + ")");
    }
    std::vector<SlopeFieldRow> rows;
    for (int j = 0; j < grid; ++j) {
        for (int i = 0; i < grid; ++i) {
            const double x = (i + 0.5) / grid;
            const double y = (j + 0.5) / grid;
            const TorusPoint z(x, y);
            if (classify_region(p, z) == Region::Outside) continue;
            SlopeFieldRow row;
            row.x = z.x();
            row.y = z.y();
            try {
                const SlopeSample s = unstable_slope(p, z);
                row.slope = s.slope;
                row.depth = s.depth_used;
                row.status = s.converged ? SampleStatus::converged : SampleStatus::not_converged;
            } catch (const error& e) {
                if (e.code() != errc::singular_orbit) throw;
                row.slope = std::numeric_limits<double>::quiet_NaN();
                row.status = SampleStatus::singular;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

/// Cones bounding the unstable direction of a co-rotating map (k > 0).
struct ConeSpec {
    double m_star = 0.0;       // expanding-eigenvector slope of L
    double stretch = 0.0;      // the corresponding eigenvalue
    double ic_lo = 0.0;        // I_C = [m_star, 0]
    double ic_hi = 0.0;
    double ict_lo = 0.0;       // I_C~ = [m_star + kappa, inf)

    bool in_ic(double s, double tol = 0.0) const { return s >= ic_lo - tol && s <= ic_hi + tol; }
    bool in_ict(double s, double tol = 0.0) const { return s >= ict_lo - tol; }
};

inline ConeSpec cone_spec(const LtmParams& p) {
    detail::require_co_rotating_hyperbolic(p);
    const double kap = p.kappa();
    const double lam = p.lambda();
    const double kl = kap * lam;
    const double root = std::sqrt(kl * (kl + 4.0));
    const double form_a = 2.0 * kap / (kl - root);
    const double form_b = -(kl + root) / (2.0 * lam);
    if (std::abs(form_a - form_b) > 1e-12 * std::max(1.0, std::abs(form_a))) {
        throw error(errc::invalid_params, "closed forms for the eigenvector slope disagree");
    }
    const Mat2 L = shear_matrices(p).L;
    const Vec2 image = L * Vec2{1.0, form_a};
    ConeSpec c;
    c.m_star = form_a;
    c.stretch = image.x;
    if (std::abs(image.y - c.stretch * form_a) > 1e-9 * std::abs(c.stretch) || std::abs(c.stretch) <= 1.0) {
        throw error(errc::invalid_params, "eigenvector slope is not the expanding direction of L");
    }
    c.ic_lo = form_a;
    c.ic_hi = 0.0;
    c.ict_lo = form_a + kap;
    return c;
}

/// Image circle f(dD) of D = {|w - m*/2| <= -m*/2} under
/// f(tau) = 1/(lambda n + 1/(kappa m + tau)).
struct DiskImage {
    double center = 0.0;
    double radius = 0.0;
};

inline DiskImage hillam_thron_disk_image(const LtmParams& p, int m_i, int n_i) {
    detail::require_co_rotating_hyperbolic(p);
    if (m_i < 1 || n_i < 1) throw error(errc::invalid_params, "run lengths must be positive");
    const double kap = p.kappa();
    const double lam = p.lambda();
    const double ms = cone_spec(p).m_star;
    const double m = m_i;
    const double n = n_i;
    const double a = 1.0 + kap * lam * m * n;
    const double b = 1.0 + lam * n * (ms + kap * m);
    DiskImage out;
    out.center = 0.5 * (kap * m / a + (ms + kap * m) / b);
    out.radius = ms / (2.0 * a * std::abs(b));
    return out;
}

/// Slope map of H^n V^m, the building block of the continued fraction.
inline std::complex<double> slope_mobius(const LtmParams& p, int m_i, int n_i, std::complex<double> tau) {
    return 1.0 / (p.lambda() * n_i + 1.0 / (p.kappa() * m_i + tau));
}

/// For k, ell > 0: vectors in the open first (third) quadrant stay there
/// under both V and H.
inline bool quadrant_cone_invariant(const LtmParams& p, Vec2 w) {
    if (p.k() <= 0 || p.ell() <= 0) {
        throw error(errc::invalid_params, "quadrant cones need k, ell > 0");
    }
    const auto m = shear_matrices(p);
    auto in_c1 = [](Vec2 v) { return v.x > 0.0 && v.y > 0.0; };
    auto in_c3 = [](Vec2 v) { return v.x < 0.0 && v.y < 0.0; };
    const Vec2 vw = m.V * w;
    const Vec2 hw = m.H * w;
    if (in_c1(w) && !(in_c1(vw) && in_c1(hw))) return false;
    if (in_c3(w) && !(in_c3(vw) && in_c3(hw))) return false;
    return true;
}

}  // namespace ltm
