#include "exmse/config.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace exmse {

namespace {

using ordered_json = nlohmann::ordered_json;

ExteriorDomain parse_domain(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    const std::vector<double> p = j.at("params").get<std::vector<double>>();
    if (kind == "ball") {
        if (p.size() != 1) throw std::runtime_error("config: ball needs {R}");
        return ExteriorDomain::make_ball(n, p[0]);
    }
    if (kind == "prolate_spheroid") {
        if (p.size() != 2)
            throw std::runtime_error("config: spheroid needs {a, b}");
        return ExteriorDomain::make_prolate_spheroid(n, p[0], p[1]);
    }
    if (kind == "two_ball_union") {
        if (p.size() != 3)
            throw std::runtime_error("config: union needs {r1, r2, d}");
        return ExteriorDomain::make_two_ball_union(n, p[0], p[1], p[2]);
    }
    throw std::runtime_error("config: unknown domain kind '" + kind + "'");
}

const char* kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::ball: return "ball";
    case DomainKind::prolate_spheroid: return "prolate_spheroid";
    case DomainKind::two_ball_union: return "two_ball_union";
    }
    return "unknown";
}

} // namespace

ContinuationOptions RunConfig::continuation() const {
    ContinuationOptions opt;
    opt.radii = radii;
    opt.h = h;
    opt.t_tol = t_tol;
    return opt;
}

RunConfig parse_config(std::istream& in) {
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: parse error: ") +
                                 e.what());
    }
    if (j.value("schema_version", 1) != 1)
        throw std::runtime_error("config: unsupported schema version");

    RunConfig cfg;
    try {
        cfg.domain = parse_domain(j.at("domain"));
        if (j.contains("s_grid") && j.contains("gamma_grid"))
            throw std::runtime_error(
                "config: give either s_grid or gamma_grid, not both");
        if (j.contains("s_grid"))
            cfg.s_grid = j.at("s_grid").get<std::vector<double>>();
        if (j.contains("gamma_grid")) {
            for (double deg :
                 j.at("gamma_grid").get<std::vector<double>>()) {
                if (!(std::fabs(deg) < 90.0))
                    throw std::runtime_error(
                        "config: gamma must lie in (-90, 90) degrees");
                cfg.s_grid.push_back(std::tan(deg * M_PI / 180.0));
            }
        }
        if (j.contains("radii"))
            cfg.radii = j.at("radii").get<std::vector<double>>();
        cfg.h = j.value("h", 0.0);
        cfg.t_tol = j.value("t_tol", 1e-8);
        if (j.contains("s") && j.contains("gamma"))
            throw std::runtime_error("config: give either s or gamma");
        cfg.s = j.value("s", 0.0);
        if (j.contains("gamma")) {
            const double deg = j.at("gamma").get<double>();
            if (!(std::fabs(deg) < 90.0))
                throw std::runtime_error(
                    "config: gamma must lie in (-90, 90) degrees");
            cfg.s = std::tan(deg * M_PI / 180.0);
        }
        cfg.R_out = j.value("R_out", 0.0);
        cfg.output_dir = j.value("output_dir", std::string("."));
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

void write_config(const RunConfig& cfg, std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["domain"] = {{"kind", kind_name(cfg.domain.kind)},
                   {"n", cfg.domain.dim},
                   {"params", cfg.domain.params}};
    j["s_grid"] = cfg.s_grid;
    j["radii"] = cfg.radii;
    j["h"] = cfg.h;
    j["t_tol"] = cfg.t_tol;
    j["s"] = cfg.s;
    j["R_out"] = cfg.R_out;
    j["output_dir"] = cfg.output_dir;
    out << j.dump(2) << '\n';
}

void validate_config(const RunConfig& cfg) {
    if (cfg.domain.dim < 3)
        throw std::runtime_error("config: dimension must be >= 3");
    for (double p : cfg.domain.params)
        if (!(p > 0.0))
            throw std::runtime_error("config: domain parameters must be > 0");
    for (std::size_t k = 1; k < cfg.s_grid.size(); ++k)
        if (!(cfg.s_grid[k] > cfg.s_grid[k - 1]))
            throw std::runtime_error(
                "config: s_grid must be strictly increasing");
    if (!cfg.radii.empty()) {
        const double varrho = circumradius(cfg.domain);
        for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
            if (!(cfg.radii[k] > varrho))
                throw std::runtime_error(
                    "config: radii must exceed the circumradius");
            if (k > 0 && !(cfg.radii[k] > cfg.radii[k - 1]))
                throw std::runtime_error(
                    "config: radii must be strictly increasing");
        }
    }
    if (cfg.h < 0.0) throw std::runtime_error("config: h must be > 0");
    if (!(cfg.t_tol > 0.0))
        throw std::runtime_error("config: t_tol must be > 0");
    if (cfg.R_out != 0.0 && !(cfg.R_out > circumradius(cfg.domain)))
        throw std::runtime_error(
            "config: R_out must exceed the circumradius");
}

} // namespace exmse
