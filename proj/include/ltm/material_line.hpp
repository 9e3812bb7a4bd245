#pragma once

// Material lines on the torus and their exact advection under the LTM.
//
// A line is stored as one reduced anchor per vertex plus the cover-space
// displacement of every edge. Anchors are mapped pointwise and edges by the
// region matrix, so coordinates stay O(1) however long the line grows and
// lengths and directions are exact images of the seed geometry.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/linalg.hpp"

namespace ltm {

class Polyline {
public:
    Polyline() = default;

    /// From vertices given in the universal cover.
    static Polyline from_points(const std::vector<Vec2>& points, bool closed = false) {
        std::vector<Vec2> anchors;
        std::vector<Vec2> edges;
        anchors.reserve(points.size());
        for (const Vec2& p : points) anchors.push_back({wrap01(p.x), wrap01(p.y)});
        for (std::size_t i = 0; i + 1 < points.size(); ++i) edges.push_back(points[i + 1] - points[i]);
        if (closed && !points.empty()) edges.push_back(points.front() - points.back());
        return Polyline(std::move(anchors), std::move(edges), closed);
    }

    static Polyline segment(Vec2 a, Vec2 b) { return from_points({a, b}); }

    Polyline(std::vector<Vec2> anchors, std::vector<Vec2> edges, bool closed)
        : anchors_(std::move(anchors)), edges_(std::move(edges)), closed_(closed) {
        const std::size_t need = closed_ ? 3 : 2;
        if (anchors_.size() < need) {
            throw error(errc::invalid_params, "polyline needs at least " + std::to_string(need) +
                                                  " vertices");
        }
        if (edges_.size() != (closed_ ? anchors_.size() : anchors_.size() - 1)) {
            throw error(errc::invalid_params, "edge count does not match vertex count");
        }
        for (const Vec2& e : edges_) {
            if (e.x == 0.0 && e.y == 0.0) {
                throw error(errc::invalid_params, "consecutive polyline vertices coincide");
            }
        }
    }

    std::size_t vertex_count() const { return anchors_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool closed() const { return closed_; }

    /// Reduced position of vertex i.
    Vec2 anchor(std::size_t i) const { return anchors_[i]; }
    /// Cover displacement from vertex i to vertex i + 1 (mod size when closed).
    Vec2 edge(std::size_t i) const { return edges_[i]; }
    const std::vector<Vec2>& anchors() const { return anchors_; }
    const std::vector<Vec2>& edges() const { return edges_; }

    /// Vertices in the universal cover, starting at the first anchor.
    std::vector<Vec2> lifted_vertices() const {
        std::vector<Vec2> out;
        out.reserve(anchors_.size());
        long double x = anchors_.front().x;
        long double y = anchors_.front().y;
        out.push_back(anchors_.front());
        for (std::size_t i = 0; i + 1 < anchors_.size(); ++i) {
            x += edges_[i].x;
            y += edges_[i].y;
            out.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
        return out;
    }

private:
    std::vector<Vec2> anchors_;
    std::vector<Vec2> edges_;
    bool closed_ = false;
};

/// Sum of Euclidean edge lengths in the cover, compensated.
inline double length(const Polyline& line) {
    CompensatedSum s;
    for (const Vec2& e : line.edges()) s.add(norm(e));
    return s.value();
}

struct AdvectOptions {
    /// Worker threads; 0 means one per hardware core. Output never depends on it.
    unsigned threads = 0;
    std::size_t vertex_budget = 50'000'000;
};

namespace detail {

/// Pieces closer than this are merged; they are below the resolution at which
/// a region can be assigned from reduced coordinates.
inline constexpr double min_piece_length = 1e-12;

/// Largest distance from R at which a piece midpoint is still taken to lie on it.
inline constexpr double domain_slack = 1e-9;

/// Parameters t in (lo, hi) where f0 + t * df hits c mod 1.
inline void crossings(double f0, double df, double c, double lo, double hi, std::vector<double>& out) {
    if (df == 0.0) return;
    const double fa = f0 + lo * df;
    const double fb = f0 + hi * df;
    const double fmin = std::min(fa, fb);
    const double fmax = std::max(fa, fb);
    const auto j_lo = static_cast<long long>(std::ceil(fmin - c));
    const auto j_hi = static_cast<long long>(std::floor(fmax - c));
    for (long long j = j_lo; j <= j_hi; ++j) {
        const double t = (c + static_cast<double>(j) - f0) / df;
        if (t > lo && t < hi) out.push_back(t);
    }
}

struct EdgeSplit {
    std::vector<double> cuts;       // interior split parameters, increasing
    std::vector<Region> regions;    // cuts.size() + 1 piece regions
};

/// Split one edge at every point where the region changes. Candidate cuts
/// come from all boundary line families; cuts with the same region on both
/// sides are dropped, since the map is affine across them.
inline EdgeSplit split_edge(const LtmParams& p, Vec2 anchor, Vec2 e, std::vector<double>& scratch) {
    const double alpha = p.alpha();
    const double beta = p.beta();
    const double kap = p.kappa();
    const double len = norm(e);

    scratch.clear();
    // x = 0 mod 1 first: the oblique family uses the reduced x of each cell
    crossings(anchor.x, e.x, 0.0, 0.0, 1.0, scratch);
    std::sort(scratch.begin(), scratch.end());
    const std::size_t n_cell_cuts = scratch.size();
    for (std::size_t c = 0; c <= n_cell_cuts; ++c) {
        const double lo = c == 0 ? 0.0 : scratch[c - 1];
        const double hi = c == n_cell_cuts ? 1.0 : scratch[c];
        const double cell = std::floor(anchor.x + 0.5 * (lo + hi) * e.x);
        if (beta < 1.0) {
            const double g0 = anchor.y + kap * (anchor.x - cell);
            const double dg = e.y + kap * e.x;
            crossings(g0, dg, 0.0, lo, hi, scratch);
            crossings(g0, dg, beta, lo, hi, scratch);
        }
    }
    if (alpha < 1.0) {
        crossings(anchor.x, e.x, alpha, 0.0, 1.0, scratch);
        if (beta < 1.0) {
            crossings(anchor.y, e.y, 0.0, 0.0, 1.0, scratch);
            crossings(anchor.y, e.y, beta, 0.0, 1.0, scratch);
        }
    }
    std::sort(scratch.begin(), scratch.end());

    const double min_dt = len > 0.0 ? min_piece_length / len : 1.0;
    std::vector<double> cuts;
    double last = 0.0;
    for (double t : scratch) {
        if (t - last >= min_dt && 1.0 - t >= min_dt) {
            cuts.push_back(t);
            last = t;
        }
    }

    EdgeSplit out;
    double lo = 0.0;
    Region prev = Region::Outside;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
        const double hi = i == cuts.size() ? 1.0 : cuts[i];
        const double mid = 0.5 * (lo + hi);
        const TorusPoint zm(anchor.x + mid * e.x, anchor.y + mid * e.y);
        Region r = classify_region(p, zm);
        if (r == Region::Outside) {
            // images of the corner points graze the outside square by rounding only
            try {
                r = nearest_region(p, zm, domain_slack);
            } catch (const error&) {
                throw error(errc::segment_outside_domain,
                            "segment piece near (" + std::to_string(wrap01(anchor.x + lo * e.x)) + ", " +
                                std::to_string(wrap01(anchor.y + lo * e.y)) + ") leaves R");
            }
        }
        if (i == 0) {
            out.regions.push_back(r);
        } else if (r != prev) {
            out.cuts.push_back(lo);
            out.regions.push_back(r);
        }
        prev = r;
        lo = hi;
    }
    return out;
}

/// Refined (and optionally mapped) output for a contiguous range of edges.
struct Chunk {
    std::vector<Vec2> anchors;
    std::vector<Vec2> edges;
    std::vector<Region> regions;
    std::vector<std::size_t> source_vertex;  // refined index of each input vertex, chunk-local
};

inline void process_edges(const LtmParams& p, const Polyline& line, std::size_t begin, std::size_t end,
                          bool map, std::size_t budget, Chunk& out) {
    std::vector<double> scratch;
    const auto& M = shear_matrices(p);
    auto matrix_for = [&](Region r) -> const Mat2& {
        return r == Region::RV ? M.V : (r == Region::RH ? M.H : M.L);
    };
    auto emit_vertex = [&](Vec2 a) {
        out.anchors.push_back(map ? forward_extended(p, TorusPoint(a)).vec() : a);
    };
    for (std::size_t i = begin; i < end; ++i) {
        const Vec2 a = line.anchor(i);
        const Vec2 e = line.edge(i);
        const EdgeSplit s = split_edge(p, a, e, scratch);
        out.source_vertex.push_back(out.anchors.size());
        emit_vertex(a);
        double lo = 0.0;
        for (std::size_t k = 0; k <= s.cuts.size(); ++k) {
            const double hi = k == s.cuts.size() ? 1.0 : s.cuts[k];
            if (k > 0) emit_vertex({wrap01(a.x + lo * e.x), wrap01(a.y + lo * e.y)});
            // the last piece takes the remainder so pieces sum to e exactly in t
            const Vec2 piece = (k == s.cuts.size() && k > 0) ? e - e * lo : e * (hi - lo);
            out.edges.push_back(map ? matrix_for(s.regions[k]) * piece : piece);
            out.regions.push_back(s.regions[k]);
            lo = hi;
        }
        if (out.anchors.size() > budget) {
            throw error(errc::vertex_budget_exceeded,
                        "refined line exceeds the vertex budget of " + std::to_string(budget));
        }
    }
}

struct Refined {
    Polyline line;
    std::vector<Region> piece_region;          // region of each output edge (pre-image side)
    std::vector<std::size_t> source_vertex;    // output index of each input vertex
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Refine every edge, optionally mapping the result forward one step.
inline Refined refine_and_map(const LtmParams& p, const Polyline& line, bool map, const AdvectOptions& opt) {
    const std::size_t n_edges = line.edge_count();
    const std::size_t n_threads =
        std::max<std::size_t>(1, std::min<std::size_t>(resolve_threads(opt.threads), n_edges / 4096 + 1));
    std::vector<Chunk> chunks(n_threads);
    std::vector<std::exception_ptr> failures(n_threads);
    auto work = [&](std::size_t c) {
        const std::size_t begin = n_edges * c / n_threads;
        const std::size_t end = n_edges * (c + 1) / n_threads;
        try {
            process_edges(p, line, begin, end, map, opt.vertex_budget, chunks[c]);
        } catch (...) {
            failures[c] = std::current_exception();
        }
    };
    if (n_threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t c = 0; c < n_threads; ++c) pool.emplace_back(work, c);
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::size_t total = 0;
    for (const auto& c : chunks) total += c.anchors.size();
    const bool open_tail = !line.closed();
    if (open_tail) ++total;
    if (total > opt.vertex_budget) {
        throw error(errc::vertex_budget_exceeded,
                    "refined line has " + std::to_string(total) + " vertices, budget " +
                        std::to_string(opt.vertex_budget));
    }

    Refined out;
    std::vector<Vec2> anchors;
    std::vector<Vec2> edges;
    anchors.reserve(total);
    edges.reserve(total);
    out.piece_region.reserve(total);
    out.source_vertex.reserve(line.vertex_count());
    for (auto& c : chunks) {
        const std::size_t offset = anchors.size();
        for (std::size_t s : c.source_vertex) out.source_vertex.push_back(offset + s);
        anchors.insert(anchors.end(), c.anchors.begin(), c.anchors.end());
        edges.insert(edges.end(), c.edges.begin(), c.edges.end());
        out.piece_region.insert(out.piece_region.end(), c.regions.begin(), c.regions.end());
        c = Chunk{};
    }
    if (open_tail) {
        out.source_vertex.push_back(anchors.size());
        const Vec2 last = line.anchor(line.vertex_count() - 1);
        anchors.push_back(map ? forward_extended(p, TorusPoint(last)).vec() : last);
    }
    out.line = Polyline(std::move(anchors), std::move(edges), line.closed());
    return out;
}

}  // namespace detail

/// Insert a vertex wherever an edge passes from one region into another, so
/// every edge interior lies in a single region.
inline Polyline refine_at_boundaries(const LtmParams& p, const Polyline& line, const AdvectOptions& opt = {}) {
    return detail::refine_and_map(p, line, false, opt).line;
}

/// One application of the map to a whole line. The image of each refined
/// piece is the straight segment given by its region matrix, so the result
/// carries no interpolation error.
inline Polyline advect(const LtmParams& p, const Polyline& line, const AdvectOptions& opt = {}) {
    return detail::refine_and_map(p, line, true, opt).line;
}

struct GrowthSeries {
    std::vector<double> lengths;
    double h_flow = 0.0;
    int burn_in = 0;
    int fit_window = 0;
    double fit_stderr = 0.0;
};

/// Least-squares slope of log(length) against iteration over the last
/// `window` points after `burn_in` (window 0: all of them).
inline GrowthSeries estimate_entropy(const std::vector<double>& series, int burn_in, int window = 0) {
    if (burn_in < 0 || static_cast<long>(series.size()) <= static_cast<long>(burn_in) + 2) {
        throw error(errc::insufficient_data, "need more than burn_in + 2 = " +
                                                 std::to_string(burn_in + 2) + " lengths, got " +
                                                 std::to_string(series.size()));
    }
    for (double v : series) {
        if (!(v > 0.0)) throw error(errc::non_positive_length, "lengths must be positive");
    }
    const int available = static_cast<int>(series.size()) - burn_in;
    if (window == 0) window = available;
    if (window < 3 || window > available) {
        throw error(errc::insufficient_data, "fit window " + std::to_string(window) +
                                                 " must lie in [3, " + std::to_string(available) + "]");
    }
    const int first = static_cast<int>(series.size()) - window;
    double mean_n = 0.0;
    double mean_y = 0.0;
    for (int i = first; i < static_cast<int>(series.size()); ++i) {
        mean_n += i;
        mean_y += std::log(series[static_cast<std::size_t>(i)]);
    }
    mean_n /= window;
    mean_y /= window;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = first; i < static_cast<int>(series.size()); ++i) {
        const double dn = i - mean_n;
        sxx += dn * dn;
        sxy += dn * (std::log(series[static_cast<std::size_t>(i)]) - mean_y);
    }
    GrowthSeries g;
    g.lengths = series;
    g.burn_in = burn_in;
    g.fit_window = window;
    g.h_flow = sxy / sxx;
    double rss = 0.0;
    for (int i = first; i < static_cast<int>(series.size()); ++i) {
        const double r = std::log(series[static_cast<std::size_t>(i)]) - mean_y - g.h_flow * (i - mean_n);
        rss += r * r;
    }
    g.fit_stderr = std::sqrt(rss / (window - 2) / sxx);
    return g;
}

inline constexpr int default_burn_in = 2;

/// Horizontal segment inside the horizontal strip for alpha = beta = 1/2.
inline Polyline default_seed() { return Polyline::segment({0.05, 0.25}, {0.45, 0.25}); }

/// Called with (iteration, line) for iteration 0 (the seed) through n_iter.
using LineObserver = std::function<void(int, const Polyline&)>;

inline GrowthSeries run_growth_experiment(const LtmParams& p, const Polyline& seed, int n_iter,
                                          const AdvectOptions& opt = {}, const LineObserver& observe = {}) {
    if (n_iter < 3) {
        throw error(errc::insufficient_data, "growth experiment needs at least 3 iterations");
    }
    std::vector<double> lengths;
    lengths.reserve(static_cast<std::size_t>(n_iter) + 1);
    Polyline line = refine_at_boundaries(p, seed, opt);
    lengths.push_back(length(line));
    if (observe) observe(0, line);
    for (int i = 1; i <= n_iter; ++i) {
        line = advect(p, line, opt);
        lengths.push_back(length(line));
        if (observe) observe(i, line);
    }
    const int burn_in = std::min(default_burn_in, n_iter - 2);
    return estimate_entropy(lengths, burn_in);
}

}  // namespace ltm
