#pragma once

// CSV and SVG writers used by the command-line tool. CSV columns are stable;
// numbers are written with max_digits10 so files round-trip exactly.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/kinks.hpp"
#include "ltm/material_line.hpp"
#include "ltm/unstable_manifold.hpp"

namespace ltm::io {

inline void full_precision(std::ostream& os) {
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

inline void write_params_header(std::ostream& os, const LtmParams& p) {
    full_precision(os);
    os << "# alpha=" << p.alpha() << " beta=" << p.beta() << " k=" << p.k() << " ell=" << p.ell()
       << " kappa=" << p.kappa() << " lambda=" << p.lambda() << '\n';
}

/// iter,length,log_length
inline void write_growth_csv(std::ostream& os, const GrowthSeries& g) {
    full_precision(os);
    os << "iter,length,log_length\n";
    for (std::size_t i = 0; i < g.lengths.size(); ++i) {
        os << i << ',' << g.lengths[i] << ',' << std::log(g.lengths[i]) << '\n';
    }
}

/// '#' header with the map parameters, then x,y per vertex in the cover.
inline void write_snapshot_csv(std::ostream& os, const LtmParams& p, int iteration, const Polyline& line) {
    write_params_header(os, p);
    os << "# iteration=" << iteration << " vertices=" << line.vertex_count()
       << " closed=" << (line.closed() ? 1 : 0) << '\n';
    os << "x,y\n";
    for (const Vec2& v : line.lifted_vertices()) os << v.x << ',' << v.y << '\n';
}

inline void write_kinks_header(std::ostream& os) { os << "iter,vertex_index,x,y,turn_dot,class\n"; }

inline void write_kink_rows(std::ostream& os, int iteration, const std::vector<BendReport>& bends,
                            bool include_obtuse = false) {
    full_precision(os);
    for (const auto& b : bends) {
        if (b.cls == BendClass::straight) continue;
        if (b.cls == BendClass::obtuse && !include_obtuse) continue;
        os << iteration << ',' << b.vertex_index << ',' << b.location.x() << ',' << b.location.y() << ','
           << b.turn_dot << ',' << to_string(b.cls) << '\n';
    }
}

/// x,y,slope,converged,depth; converged is true, false, or singular.
inline void write_slope_field_csv(std::ostream& os, const std::vector<SlopeFieldRow>& rows) {
    full_precision(os);
    os << "x,y,slope,converged,depth\n";
    for (const auto& r : rows) {
        os << r.x << ',' << r.y << ',';
        if (std::isnan(r.slope)) os << "nan";
        else os << r.slope;
        os << ',' << to_string(r.status) << ',' << r.depth << '\n';
    }
}

namespace detail {

inline std::string fmt6(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

/// Cut a cover edge at integer grid lines and append the pieces, reduced to
/// the unit square, to an SVG path.
inline void append_edge(std::string& d, Vec2 anchor, Vec2 e, Vec2& pen, bool& pen_valid) {
    std::vector<double> cuts;
    ltm::detail::crossings(anchor.x, e.x, 0.0, 0.0, 1.0, cuts);
    ltm::detail::crossings(anchor.y, e.y, 0.0, 0.0, 1.0, cuts);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double lo = 0.0;
    for (double hi : cuts) {
        if (hi - lo <= 0.0) continue;
        const double mid = 0.5 * (lo + hi);
        const Vec2 cell{std::floor(anchor.x + mid * e.x), std::floor(anchor.y + mid * e.y)};
        const Vec2 a = anchor + e * lo - cell;
        const Vec2 b = anchor + e * hi - cell;
        if (!pen_valid || std::abs(pen.x - a.x) > 1e-9 || std::abs(pen.y - a.y) > 1e-9) {
            d += "M" + fmt6(a.x) + ' ' + fmt6(a.y);
        }
        d += "L" + fmt6(b.x) + ' ' + fmt6(b.y);
        pen = b;
        pen_valid = true;
        lo = hi;
    }
}

}  // namespace detail

/// The line on the unit torus square with region boundaries dashed; y points up.
inline void write_svg(std::ostream& os, const LtmParams& p, const Polyline& line, const std::string& title) {
    using detail::fmt6;
    const double w = 0.0025;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 1 1\">\n";
    os << "<title>" << title << "</title>\n";
    os << "<defs><clipPath id=\"torus\"><rect x=\"0\" y=\"0\" width=\"1\" height=\"1\"/></clipPath></defs>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\""
       << w << "\"/>\n";
    os << "<g transform=\"translate(0,1) scale(1,-1)\" clip-path=\"url(#torus)\">\n";

    std::string bd;
    const double alpha = p.alpha();
    const double beta = p.beta();
    if (alpha < 1.0) {
        bd += "M" + fmt6(alpha) + " 0L" + fmt6(alpha) + " 1";
        if (beta < 1.0) bd += "M" + fmt6(alpha) + ' ' + fmt6(beta) + "L1 " + fmt6(beta);
    }
    if (beta < 1.0) {
        const double kap = p.kappa();
        const auto reach = static_cast<long>(std::ceil(std::abs(kap) * alpha)) + 1;
        for (double c : {0.0, beta}) {
            for (long j = -reach; j <= reach + 1; ++j) {
                const double y0 = c + static_cast<double>(j);
                bd += "M0 " + fmt6(y0) + "L" + fmt6(alpha) + ' ' + fmt6(y0 - kap * alpha);
            }
        }
    }
    if (!bd.empty()) {
        os << "<path d=\"" << bd << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"" << w
           << "\" stroke-dasharray=\"0.01 0.01\"/>\n";
    }

    std::string d;
    Vec2 pen{};
    bool pen_valid = false;
    for (std::size_t i = 0; i < line.edge_count(); ++i) {
        detail::append_edge(d, line.anchor(i), line.edge(i), pen, pen_valid);
    }
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"" << w
       << "\" stroke-linejoin=\"round\"/>\n";
    os << "</g>\n</svg>\n";
}

}  // namespace ltm::io
