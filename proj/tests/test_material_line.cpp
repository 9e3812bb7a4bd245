#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ltm/material_line.hpp"
#include "ltm/braid.hpp"
#include "support.hpp"

using namespace ltm;
using Catch::Approx;

namespace {

const LtmParams ctr(0.5, 0.5, 1, 1);
const LtmParams co(0.5, 0.5, 1, -5);
const LtmParams cat = LtmParams::cat_map();
const double golden_entropy = 0.9624236501192069;

bool near(Vec2 a, Vec2 b, double tol = 1e-12) { return norm(a - b) < tol; }

/// Insert the midpoint of every edge.
Polyline subdivide(const Polyline& line) {
    std::vector<Vec2> anchors;
    std::vector<Vec2> edges;
    for (std::size_t i = 0; i < line.edge_count(); ++i) {
        const Vec2 a = line.anchor(i);
        const Vec2 h = line.edge(i) * 0.5;
        anchors.push_back(a);
        anchors.push_back({wrap01(a.x + h.x), wrap01(a.y + h.y)});
        edges.push_back(h);
        edges.push_back(line.edge(i) - h);
    }
    if (!line.closed()) anchors.push_back(line.anchor(line.vertex_count() - 1));
    return Polyline(anchors, edges, line.closed());
}

}  // namespace

TEST_CASE("polyline construction", "[material_line]") {
    CHECK_THROWS_AS(Polyline::from_points({{0.1, 0.1}}), error);
    CHECK_THROWS_AS(Polyline::from_points({{0.1, 0.1}, {0.1, 0.1}}), error);
    CHECK_THROWS_AS(Polyline::from_points({{0.1, 0.1}, {0.2, 0.1}}, true), error);
    const auto p = Polyline::from_points({{0.9, 0.5}, {1.3, 0.5}, {1.3, 2.25}});
    CHECK(p.anchor(1).x == Approx(0.3));
    CHECK(p.anchor(2).y == Approx(0.25));
    const auto lifted = p.lifted_vertices();
    CHECK(near(lifted[2], {1.3, 2.25}));
}

TEST_CASE("length", "[material_line]") {
    const auto square = Polyline::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
    CHECK(length(square) == Approx(4.0).epsilon(1e-15));
    CHECK(length(Polyline::segment({0, 0}, {0.2, 0.1})) == Approx(0.1 * std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("refinement examples", "[material_line]") {
    const auto a = refine_at_boundaries(ctr, Polyline::segment({0.4, 0.2}, {0.6, 0.2}));
    REQUIRE(a.vertex_count() == 3);
    CHECK(near(a.anchor(1), {0.5, 0.2}));

    const auto seed = Polyline::segment({0.1, 0.3}, {0.7, 0.9});
    const auto b = refine_at_boundaries(cat, seed);
    REQUIRE(b.vertex_count() == 2);
    CHECK(b.anchors() == seed.anchors());
    CHECK(b.edges() == seed.edges());

    const auto c = refine_at_boundaries(ctr, Polyline::segment({0.0, 0.6}, {0.5, 0.6}));
    REQUIRE(c.vertex_count() == 4);
    CHECK(near(c.anchor(1), {0.2, 0.6}));
    CHECK(near(c.anchor(2), {0.45, 0.6}));

    CHECK_THROWS_MATCHES(refine_at_boundaries(co, Polyline::segment({0.6, 0.6}, {0.9, 0.9})), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::segment_outside_domain;
                         }));
}

TEST_CASE("advection examples", "[material_line]") {
    const auto img = advect(cat, Polyline::segment({0, 0}, {0.1, 0}));
    REQUIRE(img.vertex_count() == 2);
    CHECK(near(img.anchor(0), {0, 0}));
    CHECK(near(img.anchor(1), {0.2, 0.1}));
    CHECK(length(img) == Approx(0.1 * std::sqrt(5.0)).epsilon(1e-14));

    // a piece inside RV is sheared by V only
    const auto v = advect(ctr, Polyline::segment({0.1, 0.55}, {0.15, 0.55}));
    REQUIRE(v.vertex_count() == 2);
    CHECK(near(v.edge(0), {0.05, 0.1}));
}

TEST_CASE("pieces grazing the outside square by rounding stay in R", "[material_line]") {
    // image of a line through the corner (0, beta), rounded just outside R
    const LtmParams p(0.3, 0.3, 1, 1);
    const Polyline graze({{0.99999999999680123, 0.29999999999904037}, {3.4647840152501885e-12, 0.30000000001154958}},
                         {{3.4647889355361723e-12, 1.2508987428861512e-11}}, false);
    CHECK_NOTHROW(advect(p, graze));
    CHECK_THROWS_AS(refine_at_boundaries(p, Polyline::segment({0.95, 0.29}, {0.99, 0.35})), error);
}

TEST_CASE("budget overflow fails loudly", "[material_line]") {
    AdvectOptions opt;
    opt.vertex_budget = 50;
    CHECK_THROWS_MATCHES(run_growth_experiment(ctr, default_seed(), 12, opt), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::vertex_budget_exceeded;
                         }));
}

TEST_CASE("entropy estimation", "[material_line]") {
    std::vector<double> exp_series;
    for (int n = 0; n <= 10; ++n) exp_series.push_back(2.0 * std::exp(0.962 * n));
    const auto g = estimate_entropy(exp_series, 2);
    CHECK(std::abs(g.h_flow - 0.962) < 1e-12);
    CHECK(g.fit_window == 9);
    CHECK(g.fit_stderr < 1e-12);

    const auto w = estimate_entropy(exp_series, 2, 4);
    CHECK(std::abs(w.h_flow - 0.962) < 1e-12);
    CHECK(w.fit_window == 4);

    CHECK(estimate_entropy(std::vector<double>(8, 3.5), 2).h_flow == 0.0);

    CHECK_THROWS_MATCHES(estimate_entropy({1, 2, 3, 4}, 2), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::insufficient_data;
                         }));
    CHECK_THROWS_AS(estimate_entropy(exp_series, 2, 2), error);
    CHECK_THROWS_AS(estimate_entropy(exp_series, 2, 10), error);
    CHECK_THROWS_MATCHES(estimate_entropy({1, 2, 0, 4, 5, 6}, 1), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::non_positive_length;
                         }));
    CHECK_THROWS_AS(run_growth_experiment(ctr, default_seed(), 0), error);
}

TEST_CASE("growth experiments", "[material_line]") {
    const auto c = run_growth_experiment(cat, Polyline::segment({0.1, 0.2}, {0.15, 0.3}), 10);
    CHECK(std::abs(c.h_flow - golden_entropy) < 0.01 * golden_entropy);
    CHECK(c.lengths.size() == 11);

    const auto r = run_growth_experiment(ctr, default_seed(), 12);
    CHECK(std::abs(r.h_flow - 0.962) < 0.02 * 0.962);
}

TEST_CASE("refined pieces lie in a single region", "[material_line][property]") {
    testing::Rng rng(29);
    for (const auto& p : {ctr, co, LtmParams(0.3, 0.8, 2, 3), LtmParams(0.8, 0.3, 1, -7)}) {
        Polyline line = testing::random_positive_slope_seed(p, rng, 0.3);
        for (int it = 0; it < 4; ++it) {
            const auto r = detail::refine_and_map(p, line, false, {});
            const Polyline& out = r.line;
            for (std::size_t i = 0; i < out.edge_count(); ++i) {
                const Vec2 a = out.anchor(i);
                const Vec2 e = out.edge(i);
                for (double t : {0.01, 0.25, 0.5, 0.75, 0.99}) {
                    const TorusPoint z(a + e * t);
                    if (boundary_distance(p, z) < 1e-9) continue;
                    REQUIRE(classify_region(p, z) == r.piece_region[i]);
                }
                // anchors and edges describe the same curve
                const std::size_t j = (i + 1) % out.vertex_count();
                const Vec2 b = out.anchor(j);
                REQUIRE(circle_distance(a.x + e.x, b.x) < 1e-9);
                REQUIRE(circle_distance(a.y + e.y, b.y) < 1e-9);
            }
            line = advect(p, line);
        }
    }
}

TEST_CASE("advected length is insensitive to extra refinement", "[material_line][property]") {
    testing::Rng rng(31);
    for (const auto& p : {ctr, co, LtmParams(0.3, 0.8, 2, 3), LtmParams(0.8, 0.5, 1, -7)}) {
        for (int s = 0; s < 5; ++s) {
            Polyline a = refine_at_boundaries(p, testing::random_positive_slope_seed(p, rng));
            Polyline b = subdivide(a);
            for (int it = 0; it < 5; ++it) {
                a = advect(p, a);
                b = advect(p, b);
            }
            REQUIRE(std::abs(length(a) - length(b)) <= 1e-10 * length(a));
        }
    }
}

TEST_CASE("output does not depend on thread count", "[material_line][property]") {
    AdvectOptions one;
    one.threads = 1;
    AdvectOptions many;
    many.threads = 3;
    Polyline a = default_seed();
    Polyline b = default_seed();
    for (int it = 0; it < 9; ++it) {
        a = advect(co, a, one);
        b = advect(co, b, many);
    }
    REQUIRE(a.vertex_count() > 3 * 4096);
    CHECK(a.anchors() == b.anchors());
    CHECK(a.edges() == b.edges());
    CHECK(length(a) == length(b));
}

TEST_CASE("monotone growth and lower-bound respect", "[material_line][property]") {
    testing::Rng rng(37);
    const std::vector<LtmParams> grid{ctr,
                                      co,
                                      LtmParams(0.3, 0.8, 2, 3),
                                      LtmParams(0.8, 0.3, 3, 1),
                                      LtmParams(0.5, 0.8, 1, -7),
                                      LtmParams(0.3, 0.3, 1, 1),
                                      LtmParams::cat_map(2, 1)};
    for (const auto& p : grid) {
        const double bound = ltm_lower_bound(p);
        for (int s = 0; s < 5; ++s) {
            // grow to a common length scale, then fit the trailing points
            Polyline line = refine_at_boundaries(p, testing::random_positive_slope_seed(p, rng));
            std::vector<double> lengths{length(line)};
            while (lengths.back() < 1e4 && lengths.size() < 20) {
                line = advect(p, line);
                lengths.push_back(length(line));
            }
            for (std::size_t n = 3; n + 1 < lengths.size(); ++n) REQUIRE(lengths[n + 1] > lengths[n]);
            const auto g = estimate_entropy(lengths, default_burn_in, 4);
            INFO(describe(p) << " h_flow " << g.h_flow << " bound " << bound);
            REQUIRE(g.h_flow >= bound - 0.02);
        }
    }
}
