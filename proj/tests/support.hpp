#pragma once

// Random generators shared by the property tests and the acceptance suite.

#include <random>
#include <vector>

#include "ltm/ltm.hpp"

namespace ltm::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// A point of R at least `margin` from every region boundary.
inline TorusPoint random_interior_point(const LtmParams& p, Rng& rng, double margin = eps_sing) {
    for (;;) {
        const TorusPoint z(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
        if (classify_region(p, z) == Region::Outside) continue;
        if (boundary_distance(p, z) < margin) continue;
        return z;
    }
}

/// Point of R whose forward orbit over `steps` steps and backward orbit over
/// `back` steps stays `margin` from the boundaries.
inline TorusPoint random_regular_point(const LtmParams& p, Rng& rng, int steps, double margin = 1e-8) {
    for (;;) {
        const TorusPoint z = random_interior_point(p, rng, margin);
        TorusPoint f = z;
        bool ok = true;
        for (int i = 0; i < steps && ok; ++i) {
            f = forward(p, f);
            ok = boundary_distance(p, f) >= margin;
        }
        if (ok) return z;
    }
}

/// Short segment of positive slope whose refinement stays inside R.
inline Polyline random_positive_slope_seed(const LtmParams& p, Rng& rng, double len = 0.1) {
    for (;;) {
        const TorusPoint mid = random_interior_point(p, rng);
        const double angle = uniform(rng, 0.05, 1.52);  // strictly inside (0, pi/2)
        const Vec2 half{0.5 * len * std::cos(angle), 0.5 * len * std::sin(angle)};
        const Polyline seed = Polyline::segment(mid.vec() - half, mid.vec() + half);
        try {
            (void)refine_at_boundaries(p, seed);
            return seed;
        } catch (const error& e) {
            if (e.code() != errc::segment_outside_domain) throw;
        }
    }
}

}  // namespace ltm::testing
