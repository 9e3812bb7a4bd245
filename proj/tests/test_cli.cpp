#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("ltmtool_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run ltmtool(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(LTMTOOL_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

/// Value printed after `label` on the summary line that starts with it.
double summary_value(const std::string& out, const std::string& label) {
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(label, 0) == 0) return std::stod(line.substr(label.size()));
    }
    FAIL("no summary line " << label);
    return 0;
}

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("entropy-bound", "[cli]") {
    auto r = ltmtool("entropy-bound \"s1 s2^-1\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("[[2, 1], [1, 1]]") != std::string::npos);
    CHECK(r.out.find("0.962424") != std::string::npos);
    CHECK(r.out.find("pseudo-Anosov") != std::string::npos);

    r = ltmtool("entropy-bound \"s1 s2\"");
    CHECK(r.code == 0);
    CHECK(summary_value(r.out, "h_rods") == 0.0);
    CHECK(r.out.find("finite-order-or-undetected") != std::string::npos);

    r = ltmtool("entropy-bound \"s1 s1^-1\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("[[1, 0], [0, 1]]") != std::string::npos);
    CHECK(summary_value(r.out, "h_rods") == 0.0);

    r = ltmtool("entropy-bound \"s3\"");
    CHECK(r.code == 2);
    CHECK(r.err.find("bad token") != std::string::npos);
}

TEST_CASE("usage errors", "[cli]") {
    CHECK(ltmtool("").code == 2);
    CHECK(ltmtool("frobnicate").code == 2);
    CHECK(ltmtool("ltm-run --alpha").code == 2);
    CHECK(ltmtool("ltm-run --config /nonexistent/file.cfg").code == 2);
    CHECK(ltmtool("--help").code == 0);
}

TEST_CASE("ltm-run counter-rotating", "[cli]") {
    const fs::path out = scratch_dir() / "ctr";
    const auto r = ltmtool("ltm-run --k 1 --ell 1 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(std::abs(summary_value(r.out, "gap")) < 2.0);
    CHECK(summary_value(r.out, "kinks") == 0);
    CHECK(fs::exists(out / "growth.csv"));
    CHECK(fs::exists(out / "snapshot_final.svg"));
    CHECK(fs::exists(out / "snapshots" / "iter_000.csv"));
    CHECK(fs::exists(out / "snapshots" / "iter_012.csv"));
    CHECK(line_count(slurp(out / "growth.csv")) == 14);
    CHECK(line_count(slurp(out / "kinks.csv")) == 1);
}

TEST_CASE("ltm-run co-rotating", "[cli]") {
    const fs::path out = scratch_dir() / "co";
    const auto r = ltmtool("ltm-run --k 1 --ell -5 --iters 8 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(summary_value(r.out, "gap") >= 40.0);
    CHECK(summary_value(r.out, "h_flow") >= 1.5);
    CHECK(line_count(slurp(out / "kinks.csv")) > 1);
}

TEST_CASE("ltm-run failures map to exit codes", "[cli]") {
    const std::string out = " --out " + (scratch_dir() / "fail").string();
    auto r = ltmtool("ltm-run --iters 0" + out);
    CHECK(r.code == 2);
    CHECK(r.err.find("InsufficientData") != std::string::npos);
    CHECK(ltmtool("ltm-run --ell -1" + out).code == 3);
    CHECK(ltmtool("ltm-run --seed 0.6,0.6,0.9,0.9" + out).code == 3);
    CHECK(ltmtool("ltm-run --vertex-budget 100" + out).code == 4);
    CHECK(ltmtool("ltm-run --alpha 1.5" + out).code == 2);
    CHECK(ltmtool("ltm-run --seed 1,2,3" + out).code == 2);
}

TEST_CASE("outputs are identical across runs and thread counts", "[cli]") {
    const fs::path a = scratch_dir() / "det_a";
    const fs::path b = scratch_dir() / "det_b";
    REQUIRE(ltmtool("ltm-run --k 1 --ell -5 --iters 6 --threads 1 --out " + a.string()).code == 0);
    REQUIRE(ltmtool("ltm-run --k 1 --ell -5 --iters 6 --threads 3 --out " + b.string()).code == 0);
    for (const char* f : {"growth.csv", "kinks.csv", "snapshot_final.svg", "snapshots/iter_006.csv"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
    REQUIRE(ltmtool("slope-field --grid 12 --threads 1 --out " + a.string()).code == 0);
    REQUIRE(ltmtool("slope-field --grid 12 --threads 2 --out " + b.string()).code == 0);
    CHECK(slurp(a / "slope_field.csv") == slurp(b / "slope_field.csv"));
}

TEST_CASE("config files and flag overrides", "[cli]") {
    const fs::path cfg = scratch_dir() / "co.cfg";
    const fs::path saved = scratch_dir() / "saved.cfg";
    const fs::path out = scratch_dir() / "cfg_out";
    {
        std::ofstream f(cfg);
        f << "# co-rotating demo\nk=1\nell=-5\niters=4\n";
    }
    const auto r = ltmtool("kinks --config " + cfg.string() + " --iters 3 --save-config " + saved.string() +
                           " --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("iter 3") != std::string::npos);
    CHECK(r.out.find("iter 4") == std::string::npos);
    const std::string text = slurp(saved);
    CHECK(text.find("ell=-5") != std::string::npos);
    CHECK(text.find("iters=3") != std::string::npos);
    CHECK(ltmtool("kinks --config " + saved.string() + " --out " + out.string()).out == r.out);
}

TEST_CASE("slope-field", "[cli]") {
    const fs::path out = scratch_dir() / "slopes";
    CHECK(ltmtool("slope-field --grid 1 --out " + out.string()).code == 2);
    CHECK(ltmtool("slope-field --ell -2 --k -1 --alpha 1 --beta 1 --out " + out.string()).code == 0);
    CHECK(ltmtool("slope-field --ell -1 --out " + out.string()).code == 3);

    REQUIRE(ltmtool("slope-field --grid 16 --out " + out.string()).code == 0);
    std::istringstream ctr(slurp(out / "slope_field.csv"));
    std::string line;
    std::getline(ctr, line);
    CHECK(line == "x,y,slope,converged,depth");
    std::size_t rows = 0;
    while (std::getline(ctr, line)) {
        double x = 0;
        double y = 0;
        double s = 0;
        char status[16] = {};
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%15[a-z]", &x, &y, &s, status) == 4);
        if (std::string(status) == "true") CHECK(s > 0.0);
        ++rows;
    }
    CHECK(rows == 192);

    const auto r = ltmtool("slope-field --grid 16 --k 1 --ell -5 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("I_C") != std::string::npos);
    std::istringstream co(slurp(out / "slope_field.csv"));
    std::getline(co, line);
    while (std::getline(co, line)) {
        double x = 0;
        double y = 0;
        double s = 0;
        char status[16] = {};
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%15[a-z]", &x, &y, &s, status) == 4);
        if (std::string(status) != "true") continue;
        if (y <= 0.5) {
            CHECK(s >= -0.10557280900008412 - 1e-12);
            CHECK(s <= 1e-12);
        } else {
            CHECK(s >= 1.8944271909999159 - 1e-12);
        }
    }
}
