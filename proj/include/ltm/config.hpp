#pragma once

// Flat key=value experiment configuration with '#' comments.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/material_line.hpp"

namespace ltm {

struct ExperimentConfig {
    double alpha = 0.5;
    double beta = 0.5;
    std::int64_t k = 1;
    std::int64_t ell = 1;
    std::array<double, 4> seed{0.05, 0.25, 0.45, 0.25};  // x0, y0, x1, y1
    int n_iter = 12;
    std::string out_dir = "ltm_out";
    int grid = 64;
    unsigned threads = 0;
    std::uint64_t rng_seed = 20120101;

    LtmParams params() const { return {alpha, beta, k, ell}; }
    Polyline seed_line() const { return Polyline::segment({seed[0], seed[1]}, {seed[2], seed[3]}); }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof()) {
        throw error(errc::config_error, "bad value '" + value + "' for key '" + key + "'");
    }
    return out;
}

}  // namespace detail

inline std::array<double, 4> parse_seed(const std::string& text) {
    std::array<double, 4> out{};
    std::istringstream in(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(in, part, ',')) {
        if (i == 4) throw error(errc::config_error, "seed needs exactly four numbers x0,y0,x1,y1");
        out[i++] = detail::parse_number<double>("seed", detail::trim(part));
    }
    if (i != 4) throw error(errc::config_error, "seed needs exactly four numbers x0,y0,x1,y1");
    return out;
}

inline std::string serialize(const ExperimentConfig& c) {
    using detail::format_double;
    std::ostringstream out;
    out << "# linked twist map experiment\n";
    out << "alpha=" << format_double(c.alpha) << '\n';
    out << "beta=" << format_double(c.beta) << '\n';
    out << "k=" << c.k << '\n';
    out << "ell=" << c.ell << '\n';
    out << "seed=" << format_double(c.seed[0]) << ',' << format_double(c.seed[1]) << ','
        << format_double(c.seed[2]) << ',' << format_double(c.seed[3]) << '\n';
    out << "iters=" << c.n_iter << '\n';
    out << "out=" << c.out_dir << '\n';
    out << "grid=" << c.grid << '\n';
    out << "threads=" << c.threads << '\n';
    out << "rng_seed=" << c.rng_seed << '\n';
    return out.str();
}

/// Apply one key=value pair on top of `c`.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_number;
    if (key == "alpha") c.alpha = parse_number<double>(key, value);
    else if (key == "beta") c.beta = parse_number<double>(key, value);
    else if (key == "k") c.k = parse_number<std::int64_t>(key, value);
    else if (key == "ell") c.ell = parse_number<std::int64_t>(key, value);
    else if (key == "seed") c.seed = parse_seed(value);
    else if (key == "iters") c.n_iter = parse_number<int>(key, value);
    else if (key == "out") c.out_dir = value;
    else if (key == "grid") c.grid = parse_number<int>(key, value);
    else if (key == "threads") c.threads = parse_number<unsigned>(key, value);
    else if (key == "rng_seed") c.rng_seed = parse_number<std::uint64_t>(key, value);
    else throw error(errc::config_error, "unknown key '" + key + "'");
}

inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw error(errc::config_error, "line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return base;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw error(errc::config_error, "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

}  // namespace ltm
