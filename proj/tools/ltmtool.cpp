// ltmtool: experiments on toral linked twist maps and 3-strand braids.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "ltm/io.hpp"
#include "ltm/ltm.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_domain = 3;
constexpr int exit_resource = 4;

int exit_code_for(ltm::errc c) {
    using ltm::errc;
    switch (c) {
        case errc::parse_error:
        case errc::config_error:
        case errc::empty_word:
        case errc::insufficient_data:
        case errc::invalid_params:
            return exit_usage;
        case errc::vertex_budget_exceeded:
        case errc::overflow:
            return exit_resource;
        default:
            return exit_domain;
    }
}

/// Flags shared by the map subcommands; only those given on the command line
/// override the config file.
struct MapFlags {
    std::string config_path;
    std::string save_config;
    double alpha = 0;
    double beta = 0;
    std::int64_t k = 0;
    std::int64_t ell = 0;
    int iters = 0;
    std::string seed;
    std::string out;
    int grid = 0;
    unsigned threads = 0;
    std::uint64_t rng_seed = 0;

    CLI::Option* o_alpha = nullptr;
    CLI::Option* o_beta = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_ell = nullptr;
    CLI::Option* o_iters = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_grid = nullptr;
    CLI::Option* o_threads = nullptr;
    CLI::Option* o_rng = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
        app->add_option("--save-config", save_config, "write the resolved config to this file");
        o_alpha = app->add_option("--alpha", alpha, "vertical strip width in (0,1]");
        o_beta = app->add_option("--beta", beta, "horizontal strip height in (0,1]");
        o_k = app->add_option("--k", k, "vertical shear strength (nonzero integer)");
        o_ell = app->add_option("--ell", ell, "horizontal shear strength (nonzero integer)");
        o_iters = app->add_option("--iters", iters, "number of map iterations");
        o_seed = app->add_option("--seed", seed, "seed segment x0,y0,x1,y1");
        o_out = app->add_option("--out", out, "output directory");
        o_grid = app->add_option("--grid", grid, "slope-field grid resolution N (N x N)");
        o_threads = app->add_option("--threads", threads, "worker threads (0: all cores)");
        o_rng = app->add_option("--rng-seed", rng_seed, "seed for sampled checks");
    }

    ltm::ExperimentConfig resolve() const {
        ltm::ExperimentConfig c;
        if (!config_path.empty()) c = ltm::load_config(config_path);
        if (o_alpha->count()) c.alpha = alpha;
        if (o_beta->count()) c.beta = beta;
        if (o_k->count()) c.k = k;
        if (o_ell->count()) c.ell = ell;
        if (o_iters->count()) c.n_iter = iters;
        if (o_seed->count()) c.seed = ltm::parse_seed(seed);
        if (o_out->count()) c.out_dir = out;
        if (o_grid->count()) c.grid = grid;
        if (o_threads->count()) c.threads = threads;
        if (o_rng->count()) c.rng_seed = rng_seed;
        if (!save_config.empty()) {
            std::ofstream f(save_config);
            f << ltm::serialize(c);
        }
        return c;
    }
};

std::string sig6(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

int cmd_entropy_bound(const std::string& word_text) {
    const ltm::BraidWord word = ltm::parse_braid_word(word_text);
    const ltm::BurauMatrix m = ltm::burau_matrix(word);
    const double rho = ltm::spectral_radius(m);
    const ltm::EntropyBound h = ltm::h_rods(word);
    std::cout << "word            " << ltm::to_string(word) << '\n';
    std::cout << "burau matrix    [[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]\n";
    std::cout << "spectral radius " << sig6(rho) << '\n';
    std::cout << "h_rods          " << sig6(h.h_rods) << '\n';
    std::cout << "class           " << ltm::to_string(h.classification) << '\n';
    return exit_ok;
}

std::optional<double> lower_bound_or_vacuous(const ltm::LtmParams& p) {
    try {
        return ltm::ltm_lower_bound(p);
    } catch (const ltm::error& e) {
        if (e.code() != ltm::errc::non_hyperbolic_bound) throw;
        return std::nullopt;
    }
}

void require_hyperbolic(const ltm::LtmParams& p) {
    if (!p.hyperbolic()) {
        throw ltm::error(ltm::errc::non_hyperbolic_params,
                         "co-rotating maps need kappa*lambda < -4 (" + ltm::describe(p) + ")");
    }
}

struct RunLimits {
    std::size_t snapshot_limit = 2'000'000;
    std::size_t svg_limit = 200'000;
    std::size_t vertex_budget = 50'000'000;
};

int cmd_ltm_run(const ltm::ExperimentConfig& c, const RunLimits& lim) {
    const ltm::LtmParams p = c.params();
    require_hyperbolic(p);
    if (c.n_iter < 3) {
        throw ltm::error(ltm::errc::insufficient_data, "ltm-run needs --iters >= 3 to fit a growth rate");
    }
    const fs::path out = c.out_dir;
    fs::create_directories(out / "snapshots");

    auto kinks = open_out(out / "kinks.csv");
    ltm::io::write_kinks_header(kinks);

    std::optional<ltm::Polyline> svg_line;
    int svg_iter = -1;
    std::size_t total_kinks = 0;
    const ltm::AdvectOptions opt{c.threads, lim.vertex_budget};
    const auto t0 = std::chrono::steady_clock::now();
    const ltm::GrowthSeries g =
        ltm::run_growth_experiment(p, c.seed_line(), c.n_iter, opt, [&](int it, const ltm::Polyline& line) {
            if (line.vertex_count() >= 3) {
                const auto bends = ltm::detect_bends(line);
                for (const auto& b : bends) total_kinks += b.cls == ltm::BendClass::kink;
                ltm::io::write_kink_rows(kinks, it, bends);
            }
            if (line.vertex_count() <= lim.snapshot_limit) {
                char name[32];
                std::snprintf(name, sizeof name, "iter_%03d.csv", it);
                auto f = open_out(out / "snapshots" / name);
                ltm::io::write_snapshot_csv(f, p, it, line);
            } else {
                std::cerr << "note: iteration " << it << " has " << line.vertex_count()
                          << " vertices; snapshot skipped (limit " << lim.snapshot_limit << ")\n";
            }
            if (line.vertex_count() <= lim.svg_limit) {
                svg_line = line;
                svg_iter = it;
            }
        });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    {
        auto f = open_out(out / "growth.csv");
        ltm::io::write_growth_csv(f, g);
    }
    if (svg_line) {
        auto f = open_out(out / "snapshot_final.svg");
        ltm::io::write_svg(f, p, *svg_line,
                           ltm::describe(p) + " iteration " + std::to_string(svg_iter));
        if (svg_iter != c.n_iter) {
            std::cerr << "note: snapshot_final.svg shows iteration " << svg_iter
                      << " (later iterates exceed " << lim.svg_limit << " vertices)\n";
        }
    }

    const auto bound = lower_bound_or_vacuous(p);
    std::cout << "params          " << ltm::describe(p) << " ("
              << (p.counter_rotating() ? "counter-rotating" : "co-rotating") << ")\n";
    std::cout << "iterations      " << c.n_iter << " (fit window " << g.fit_window << ", burn-in "
              << g.burn_in << ")\n";
    std::cout << "final length    " << sig6(g.lengths.back()) << '\n';
    std::cout << "h_flow          " << sig6(g.h_flow) << " +- " << sig6(g.fit_stderr) << '\n';
    if (bound) {
        std::cout << "h_rods bound    " << sig6(*bound) << '\n';
        std::cout << "gap             " << sig6(100.0 * (g.h_flow - *bound) / g.h_flow) << "%\n";
        std::cout << "bound share     " << sig6(100.0 * *bound / g.h_flow) << "% of h_flow\n";
    } else {
        std::cout << "h_rods bound    vacuous (cat-map matrix has spectral radius 1)\n";
    }
    std::cout << "kinks           " << total_kinks << " over all iterations\n";
    std::cout << "elapsed         " << sig6(secs) << " s\n";
    return exit_ok;
}

int cmd_slope_field(const ltm::ExperimentConfig& c) {
    const ltm::LtmParams p = c.params();
    const auto rows = ltm::sample_slope_field(p, c.grid);
    const fs::path out = c.out_dir;
    fs::create_directories(out);
    auto f = open_out(out / "slope_field.csv");
    ltm::io::write_slope_field_csv(f, rows);
    std::size_t converged = 0;
    std::size_t singular = 0;
    for (const auto& r : rows) {
        converged += r.status == ltm::SampleStatus::converged;
        singular += r.status == ltm::SampleStatus::singular;
    }
    std::cout << "params      " << ltm::describe(p) << '\n';
    std::cout << "samples     " << rows.size() << " (" << converged << " converged, " << singular
              << " singular)\n";
    if (p.co_rotating()) {
        const auto cone = ltm::cone_spec(p);
        std::cout << "I_C         [" << sig6(cone.ic_lo) << ", 0]\n";
        std::cout << "I_C~        [" << sig6(cone.ict_lo) << ", inf)\n";
    }
    std::cout << "wrote       " << (out / "slope_field.csv").string() << '\n';
    return exit_ok;
}

int cmd_kinks(const ltm::ExperimentConfig& c, bool all_bends, std::size_t vertex_budget) {
    const ltm::LtmParams p = c.params();
    require_hyperbolic(p);
    if (c.n_iter < 1) throw ltm::error(ltm::errc::insufficient_data, "kinks needs --iters >= 1");
    const fs::path out = c.out_dir;
    fs::create_directories(out);
    auto f = open_out(out / "kinks.csv");
    ltm::io::write_kinks_header(f);
    const ltm::AdvectOptions opt{c.threads, vertex_budget};
    ltm::Polyline line = ltm::refine_at_boundaries(p, c.seed_line(), opt);
    for (int it = 0; it <= c.n_iter; ++it) {
        if (it > 0) line = ltm::advect(p, line, opt);
        std::size_t n = 0;
        if (line.vertex_count() >= 3) {
            const auto bends = ltm::detect_bends(line);
            for (const auto& b : bends) n += b.cls == ltm::BendClass::kink;
            ltm::io::write_kink_rows(f, it, bends, all_bends);
        }
        std::cout << "iter " << it << "  vertices " << line.vertex_count() << "  kinks " << n << '\n';
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linked twist map entropy and secondary-folding toolkit"};
    app.require_subcommand(1);

    std::string word;
    auto* eb = app.add_subcommand("entropy-bound", "Burau matrix and h_rods of a 3-strand braid word");
    eb->add_option("word", word, "braid word, e.g. \"s1 s2^-1\"")->required();

    RunLimits limits;
    MapFlags run_flags;
    auto* run = app.add_subcommand("ltm-run", "advect a seed line, fit h_flow, census kinks");
    run_flags.attach(run);
    run->add_option("--snapshot-limit", limits.snapshot_limit, "skip snapshot CSVs above this vertex count");
    run->add_option("--svg-limit", limits.svg_limit, "largest iterate rendered to SVG");
    run->add_option("--vertex-budget", limits.vertex_budget, "abort above this vertex count");

    MapFlags slope_flags;
    auto* slope = app.add_subcommand("slope-field", "unstable-manifold slopes on an N x N grid");
    slope_flags.attach(slope);

    MapFlags kink_flags;
    bool all_bends = false;
    std::size_t kink_budget = 50'000'000;
    auto* kinks = app.add_subcommand("kinks", "per-iteration kink census of an advected seed line");
    kink_flags.attach(kinks);
    kinks->add_flag("--all-bends", all_bends, "also list obtuse bends in kinks.csv");
    kinks->add_option("--vertex-budget", kink_budget, "abort above this vertex count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*eb) return cmd_entropy_bound(word);
        if (*run) return cmd_ltm_run(run_flags.resolve(), limits);
        if (*slope) return cmd_slope_field(slope_flags.resolve());
        if (*kinks) return cmd_kinks(kink_flags.resolve(), all_bends, kink_budget);
    } catch (const ltm::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}
