#pragma once

// Bend classification of advected lines and the kink-zone prediction.

#include <cmath>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/material_line.hpp"
#include "ltm/unstable_manifold.hpp"

namespace ltm {

inline constexpr double tol_bend = 1e-10;
inline constexpr double tol_straight = 1e-10;
inline constexpr double min_edge_length = 1e-14;

enum class BendClass { straight, obtuse, kink };

inline const char* to_string(BendClass c) {
    switch (c) {
        case BendClass::straight: return "straight";
        case BendClass::obtuse: return "obtuse";
        case BendClass::kink: return "kink";
    }
    return "?";
}

struct BendReport {
    std::size_t vertex_index = 0;
    TorusPoint location;
    double turn_dot = 1.0;  // cosine between incoming and outgoing directions
    BendClass cls = BendClass::straight;
};

inline double turn_dot(Vec2 incoming, Vec2 outgoing) {
    const double a = norm(incoming);
    const double b = norm(outgoing);
    if (a < min_edge_length || b < min_edge_length) {
        throw error(errc::degenerate_segment, "edge shorter than 1e-14");
    }
    return dot(incoming, outgoing) / (a * b);
}

/// A kink is a strictly acute angle between the two segments at the vertex,
/// i.e. the line turns back on itself.
inline BendClass classify_turn(double td) {
    if (td < -tol_bend) return BendClass::kink;
    if (std::abs(1.0 - td) < tol_straight) return BendClass::straight;
    return BendClass::obtuse;
}

/// One report per interior vertex (every vertex of a closed line). Edge
/// vectors come from the cover, so torus wrapping never fakes a turn.
inline std::vector<BendReport> detect_bends(const Polyline& line) {
    const std::size_t n = line.vertex_count();
    if (n < 3) throw error(errc::invalid_params, "bend detection needs at least 3 vertices");
    for (const Vec2& e : line.edges()) {
        if (norm(e) < min_edge_length) throw error(errc::degenerate_segment, "edge shorter than 1e-14");
    }
    std::vector<BendReport> out;
    const std::size_t first = line.closed() ? 0 : 1;
    const std::size_t last = line.closed() ? n : n - 1;
    out.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) {
        const Vec2 in = line.edge(i == 0 ? line.edge_count() - 1 : i - 1);
        const Vec2 outgoing = line.edge(i);
        BendReport r;
        r.vertex_index = i;
        r.location = TorusPoint(line.anchor(i));
        r.turn_dot = turn_dot(in, outgoing);
        r.cls = classify_turn(r.turn_dot);
        out.push_back(r);
    }
    return out;
}

inline std::size_t count_kinks(const Polyline& line) {
    if (line.vertex_count() < 3) return 0;
    std::size_t n = 0;
    for (const auto& b : detect_bends(line)) n += b.cls == BendClass::kink;
    return n;
}

/// Slopes s with (-kappa - 1/lambda, 0]: one step folds such a line back at
/// an RL/RH boundary point.
inline bool in_kink_slope_window(const LtmParams& p, double slope) {
    return slope > -p.kappa() - 1.0 / p.lambda() && slope <= 0.0;
}

/// z on the boundary between RL and RH (x = alpha or x = 0 with 0 <= y <= beta),
/// carrying a line of slope in the kink window.
inline bool kink_zone_predicate(const LtmParams& p, const TorusPoint& z, double slope) {
    detail::require_co_rotating_hyperbolic(p);
    const bool on_vertical_edge =
        circle_distance(z.x(), p.alpha()) < eps_sing || circle_distance(z.x(), 0.0) < eps_sing;
    const bool in_band = z.y() <= p.beta() + eps_sing || z.y() >= 1.0 - eps_sing;
    return on_vertical_edge && in_band && in_kink_slope_window(p, slope);
}

struct KinkCount {
    int iteration = 0;
    std::size_t kinks = 0;
    bool operator==(const KinkCount&) const = default;
};

/// Kink count of the refined seed (iteration 0) and of each of n_iter images.
inline std::vector<KinkCount> kink_census(const LtmParams& p, const Polyline& seed, int n_iter,
                                          const AdvectOptions& opt = {}) {
    if (n_iter < 0) throw error(errc::insufficient_data, "negative iteration count");
    std::vector<KinkCount> out;
    Polyline line = refine_at_boundaries(p, seed, opt);
    out.push_back({0, count_kinks(line)});
    for (int i = 1; i <= n_iter; ++i) {
        line = advect(p, line, opt);
        out.push_back({i, count_kinks(line)});
    }
    return out;
}

struct KinkPrediction {
    std::size_t vertex_index = 0;  // in the refined input line
    TorusPoint location;
    double image_turn_dot = 1.0;
    bool confirmed = false;
};

/// Flag every RL/RH boundary vertex whose two adjacent segments have slopes
/// in the kink window, then advect once and check for an acute bend at the
/// image vertex.
inline std::vector<KinkPrediction> predict_then_confirm(const LtmParams& p, const Polyline& line,
                                                        const AdvectOptions& opt = {}) {
    detail::require_co_rotating_hyperbolic(p);
    const auto refined = detail::refine_and_map(p, line, false, opt);
    const auto mapped = detail::refine_and_map(p, refined.line, true, opt);
    const Polyline& src = refined.line;
    const std::size_t n = src.vertex_count();

    std::vector<KinkPrediction> out;
    const std::size_t first = src.closed() ? 0 : 1;
    const std::size_t last = src.closed() ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
        const std::size_t in_idx = i == 0 ? src.edge_count() - 1 : i - 1;
        const Region r_in = refined.piece_region[in_idx];
        const Region r_out = refined.piece_region[i];
        const bool straddles = (r_in == Region::RL && r_out == Region::RH) ||
                               (r_in == Region::RH && r_out == Region::RL);
        if (!straddles) continue;
        const Vec2 e_in = src.edge(in_idx);
        const Vec2 e_out = src.edge(i);
        if (e_in.x == 0.0 || e_out.x == 0.0) continue;
        const TorusPoint z(src.anchor(i));
        if (!kink_zone_predicate(p, z, e_in.y / e_in.x) || !kink_zone_predicate(p, z, e_out.y / e_out.x)) {
            continue;
        }
        const std::size_t img = mapped.source_vertex[i];
        const Polyline& image = mapped.line;
        const std::size_t img_in = img == 0 ? image.edge_count() - 1 : img - 1;
        KinkPrediction pr;
        pr.vertex_index = i;
        pr.location = z;
        pr.image_turn_dot = turn_dot(image.edge(img_in), image.edge(img));
        pr.confirmed = classify_turn(pr.image_turn_dot) == BendClass::kink;
        out.push_back(pr);
    }
    return out;
}

}  // namespace ltm
