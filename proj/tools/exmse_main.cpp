#include "exmse/catenoid.hpp"
#include "exmse/config.hpp"
#include "exmse/continuation.hpp"
#include "exmse/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace exmse;

namespace {

int cmd_sigma(int n) {
    if (n < 3) {
        std::cerr << "sigma: the integral diverges for n=" << n
                  << " (defined for n >= 3)\n";
        return 1;
    }
    const SigmaValue q = sigma_quadrature(n);
    const SigmaValue b = sigma_beta(n);
    std::printf("sigma_%d quadrature  %.15f\n", n, q.value);
    std::printf("sigma_%d beta form   %.15f\n", n, b.value);
    std::printf("discrepancy         %.3e\n", std::fabs(q.value - b.value));
    return 0;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

int cmd_solve(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const ContinuationOptions opt = cfg.continuation();
    double R_out = cfg.R_out;
    if (R_out == 0.0)
        R_out = cfg.radii.empty() ? 16.0 * circumradius(cfg.domain)
                                  : cfg.radii.back();

    const OuterValueResult res =
        maximal_outer_value(cfg.domain, R_out, cfg.s, opt);

    fs::create_directories(cfg.output_dir);
    auto csv = open_out(fs::path(cfg.output_dir) / "solution.csv");
    write_field_csv(res.field, csv);
    auto stats = open_out(fs::path(cfg.output_dir) / "solution_stats.json");
    stats << "{\n  \"schema_version\": 1,\n  \"s\": " << cfg.s
          << ",\n  \"gamma\": " << std::atan(cfg.s)
          << ",\n  \"R_out\": " << R_out << ",\n  \"t\": " << res.t_k
          << ",\n  \"solves\": " << res.solves
          << ",\n  \"newton_iterations\": " << res.field.newton_iterations
          << ",\n  \"residual\": " << res.field.residual_norm
          << ",\n  \"monotone\": " << (res.monotone ? "true" : "false")
          << "\n}\n";
    std::printf("solve: t=%.10f written to %s\n", res.t_k,
                cfg.output_dir.c_str());
    return 0;
}

int cmd_family(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    if (cfg.s_grid.empty())
        throw std::runtime_error("family: config must provide s_grid/gamma_grid");
    const FoliationFamily fam =
        solve_family(cfg.domain, cfg.s_grid, cfg.continuation());

    fs::create_directories(cfg.output_dir);
    auto out = open_out(fs::path(cfg.output_dir) / "family.json");
    write_family_json(fam, out);
    for (std::size_t k = 0; k < fam.leaves.size(); ++k) {
        auto csv = open_out(fs::path(cfg.output_dir) /
                            ("leaf_" + std::to_string(k) + ".csv"));
        write_field_csv(fam.leaves[k].field, csv);
    }
    int bad = 0;
    for (const auto& leaf : fam.leaves)
        if (!leaf.ok) ++bad;
    std::printf("family: %zu leaves (%d failed) written to %s\n",
                fam.leaves.size(), bad, cfg.output_dir.c_str());
    return bad == 0 ? 0 : 1;
}

int cmd_verify(const std::string& config_path, const std::string& family_path) {
    FoliationFamily fam;
    std::string out_dir = ".";
    if (!family_path.empty()) {
        std::ifstream in(family_path);
        if (!in) throw std::runtime_error("verify: cannot open " + family_path);
        fam = read_family_json(in);
    } else {
        const RunConfig cfg = load_config(config_path);
        if (cfg.s_grid.empty())
            throw std::runtime_error(
                "verify: config must provide s_grid/gamma_grid");
        fam = solve_family(cfg.domain, cfg.s_grid, cfg.continuation());
        out_dir = cfg.output_dir;
    }
    const VerificationReport report = verify_family(fam);
    fs::create_directories(out_dir);
    auto out = open_out(fs::path(out_dir) / "report.json");
    write_report_json(report, out);
    for (const auto& c : report.checks)
        std::printf("%-10s %s  measured=%.6g threshold=%.6g  %s\n",
                    c.name.c_str(), c.pass ? "pass" : "FAIL", c.measured,
                    c.threshold, c.note.c_str());
    std::printf("overall    %s  (eps_h=%.3e)\n",
                report.pass ? "pass" : "FAIL", report.eps_h);
    return report.pass ? 0 : 2;
}

int cmd_report(const std::string& family_path) {
    std::ifstream in(family_path);
    if (!in) throw std::runtime_error("report: cannot open " + family_path);
    const FoliationFamily fam = read_family_json(in);
    std::printf("domain n=%d, h=%.6g, radii:", fam.domain.dim, fam.h);
    for (double r : fam.radii) std::printf(" %.6g", r);
    std::printf("\n%10s %10s %12s %12s %10s %6s\n", "s", "gamma", "c", "a",
                "fit_res", "ok");
    for (const auto& leaf : fam.leaves)
        std::printf("%10.5f %10.5f %12.8f %12.8f %10.2e %6s\n", leaf.s,
                    std::atan(leaf.s), leaf.fit.c, leaf.fit.a,
                    leaf.fit.residual, leaf.ok ? "yes" : "no");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Bounded exterior solutions of the minimal surface equation:\n"
        "families of leaves over an axisymmetric obstacle, with limit\n"
        "heights, barriers, and verification reports.\n\n"
        "CSV columns: radial grids r,u,grad_norm; meridian grids "
        "y,z,u,grad_norm."};
    app.require_subcommand(1);

    int n = 3;
    auto* sigma_cmd =
        app.add_subcommand("sigma", "Dimensional constant by two methods");
    sigma_cmd->add_option("-n,--dimension", n, "ambient dimension (>= 3)");

    std::string config_path, family_path;
    auto* solve_cmd =
        app.add_subcommand("solve", "Single leaf at the configured slope");
    solve_cmd->add_option("-c,--config", config_path, "config JSON")
        ->required();

    auto* family_cmd =
        app.add_subcommand("family", "Leaf family over the slope grid");
    family_cmd->add_option("-c,--config", config_path, "config JSON")
        ->required();

    auto* verify_cmd = app.add_subcommand(
        "verify", "Checks on a family (exit 0 pass, 2 check failed)");
    verify_cmd->add_option("-c,--config", config_path,
                           "config JSON (solve then verify)");
    verify_cmd->add_option("-f,--family", family_path,
                           "existing family JSON");

    auto* report_cmd =
        app.add_subcommand("report", "Human-readable family summary");
    report_cmd->add_option("-f,--family", family_path, "family JSON")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(sigma_cmd)) return cmd_sigma(n);
        if (app.got_subcommand(solve_cmd)) return cmd_solve(config_path);
        if (app.got_subcommand(family_cmd)) return cmd_family(config_path);
        if (app.got_subcommand(verify_cmd)) {
            if (config_path.empty() == family_path.empty())
                throw std::runtime_error(
                    "verify: give exactly one of --config/--family");
            return cmd_verify(config_path, family_path);
        }
        if (app.got_subcommand(report_cmd)) return cmd_report(family_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
