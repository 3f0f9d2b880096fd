#include "doctest.h"

#include "exmse/config.hpp"
#include "exmse/continuation.hpp"
#include "exmse/radial.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace exmse;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the CLI under test (path given by the build through EXMSE_CLI).
RunResult run_cli(const std::string& args) {
    const char* exe = std::getenv("EXMSE_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "EXMSE_CLI must point at the binary");
    const std::string cmd = std::string(exe) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) res.out += buf;
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("exmse_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string ball_config(const std::string& out_sub, const std::string& extra) {
    return "{\n"
           "  \"domain\": {\"kind\": \"ball\", \"n\": 3, \"params\": [1.0]},\n"
           "  \"radii\": [4.0, 8.0],\n"
           "  \"h\": 0.00390625,\n"
           "  \"output_dir\": \"" +
           (work_dir() / out_sub).string() + "\"" +
           (extra.empty() ? "" : ",\n  " + extra) + "\n}\n";
}

} // namespace

TEST_CASE("sigma subcommand: both routes agree, low dimensions refused") {
    RunResult res = run_cli("sigma -n 3");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("1.311028777") != std::string::npos);
    CHECK(res.out.find("quadrature") != std::string::npos);
    CHECK(res.out.find("beta") != std::string::npos);

    CHECK(run_cli("sigma -n 10").exit_code == 0);

    res = run_cli("sigma -n 2");
    CHECK(res.exit_code == 1);
    CHECK(res.out.find("diverges") != std::string::npos);
}

TEST_CASE("solve: zero slope writes the zero solution") {
    const fs::path cfg =
        write_text("solve0.json", ball_config("out0", "\"s\": 0.0"));
    RunResult res = run_cli("solve -c " + cfg.string());
    CHECK(res.exit_code == 0);
    std::ifstream csv(work_dir() / "out0/solution.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    CHECK(line == "r,u,grad_norm");
    while (std::getline(csv, line)) {
        double r, u, gn;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &u, &gn) == 3);
        CHECK(u == 0.0);
        CHECK(gn == 0.0);
    }
    const std::string stats = slurp(work_dir() / "out0/solution_stats.json");
    CHECK(stats.find("\"t\": 0") != std::string::npos);
}

TEST_CASE("solve: unit slope reproduces the exact radial profile") {
    const fs::path cfg = write_text(
        "solve1.json", ball_config("out1", "\"s\": 1.0, \"R_out\": 8.0"));
    CHECK(run_cli("solve -c " + cfg.string()).exit_code == 0);
    const RadialProfile p = radial_solution(1.0, 1.0, 3);
    std::ifstream csv(work_dir() / "out1/solution.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    double worst = 0.0;
    while (std::getline(csv, line)) {
        double r, u, gn;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &u, &gn) == 3);
        worst = std::max(worst, std::fabs(u - p.value(r)));
    }
    CHECK(worst < 5e-3);
}

TEST_CASE("invalid config exits 1 and leaves no partial outputs") {
    const fs::path cfg = write_text(
        "bad.json",
        "{\n"
        "  \"domain\": {\"kind\": \"ball\", \"n\": 2, \"params\": [1.0]},\n"
        "  \"s\": 1.0,\n  \"output_dir\": \"" +
            (work_dir() / "outbad").string() + "\"\n}\n");
    RunResult res = run_cli("solve -c " + cfg.string());
    CHECK(res.exit_code == 1);
    CHECK(res.out.find("error:") != std::string::npos);
    CHECK_FALSE(fs::exists(work_dir() / "outbad"));
}

TEST_CASE("family: deterministic outputs, verify and report consume them") {
    const fs::path cfg = write_text(
        "family.json_cfg",
        ball_config("fam", "\"gamma_grid\": [20.0, 45.0, 70.0]"));
    REQUIRE(run_cli("family -c " + cfg.string()).exit_code == 0);
    const fs::path fam_path = work_dir() / "fam/family.json";
    REQUIRE(fs::exists(fam_path));
    CHECK(fs::exists(work_dir() / "fam/leaf_0.csv"));
    CHECK(fs::exists(work_dir() / "fam/leaf_2.csv"));
    const std::string first = slurp(fam_path);

    SUBCASE("re-running produces byte-identical family JSON") {
        REQUIRE(run_cli("family -c " + cfg.string()).exit_code == 0);
        CHECK(slurp(fam_path) == first);
    }

    SUBCASE("verify passes on the computed family") {
        RunResult res = run_cli("verify -f " + fam_path.string());
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("overall    pass") != std::string::npos);
        CHECK(fs::exists("report.json"));
        fs::remove("report.json");
    }

    SUBCASE("verify exits 2 on a corrupted family") {
        std::ifstream in(fam_path);
        FoliationFamily fam = read_family_json(in);
        REQUIRE(fam.leaves.size() == 3);
        fam.leaves[0].field.values *= 10.0; // crosses the next leaf
        const fs::path bad = work_dir() / "fam/corrupt.json";
        std::ofstream out(bad);
        write_family_json(fam, out);
        out.close();
        RunResult res = run_cli("verify -f " + bad.string());
        CHECK(res.exit_code == 2);
        CHECK(res.out.find("FAIL") != std::string::npos);
        fs::remove("report.json");
    }

    SUBCASE("report prints the leaf table") {
        RunResult res = run_cli("report -f " + fam_path.string());
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("gamma") != std::string::npos);
        CHECK(res.out.find("yes") != std::string::npos);
    }
}

TEST_CASE("verify argument validation") {
    CHECK(run_cli("verify -f /nonexistent/family.json").exit_code == 1);
    CHECK(run_cli("verify").exit_code == 1);
}

TEST_CASE("config round trip through the library") {
    RunConfig cfg;
    cfg.domain = ExteriorDomain::make_prolate_spheroid(3, 2.0, 1.0);
    cfg.s_grid = {0.2, 0.7, 1.9};
    cfg.radii = {8.0, 16.0};
    cfg.h = 0.125;
    cfg.t_tol = 1e-7;
    cfg.s = 0.7;
    cfg.R_out = 12.0;
    cfg.output_dir = "somewhere";
    std::stringstream buf;
    write_config(cfg, buf);
    const RunConfig back = parse_config(buf);
    CHECK(back.domain.kind == cfg.domain.kind);
    CHECK(back.domain.params == cfg.domain.params);
    CHECK(back.s_grid == cfg.s_grid);
    CHECK(back.radii == cfg.radii);
    CHECK(back.h == cfg.h);
    CHECK(back.t_tol == cfg.t_tol);
    CHECK(back.s == cfg.s);
    CHECK(back.R_out == cfg.R_out);
    CHECK(back.output_dir == cfg.output_dir);
}

TEST_CASE("gamma grids map to tangents and reject 90 degrees") {
    std::stringstream ok(
        "{\"domain\": {\"kind\": \"ball\", \"n\": 3, \"params\": [1.0]},"
        " \"gamma_grid\": [45.0]}");
    const RunConfig cfg = parse_config(ok);
    REQUIRE(cfg.s_grid.size() == 1);
    CHECK(cfg.s_grid[0] == doctest::Approx(1.0).epsilon(1e-12));

    std::stringstream bad(
        "{\"domain\": {\"kind\": \"ball\", \"n\": 3, \"params\": [1.0]},"
        " \"gamma_grid\": [90.0]}");
    CHECK_THROWS(parse_config(bad));
}
