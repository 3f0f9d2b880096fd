#pragma once

#include "exmse/continuation.hpp"

#include <iosfwd>
#include <string>

namespace exmse {

// Batch-run description: domain, slope grid, discretization, outputs.
// Slopes may be given directly (s_grid) or as Gauss-map angles in degrees
// (gamma_grid, converted via s = tan gamma at parse time).
struct RunConfig {
    ExteriorDomain domain = ExteriorDomain::make_ball(3, 1.0);
    std::vector<double> s_grid;
    std::vector<double> radii; // empty: circumradius * {4, 8, 16}
    double h = 0.0;            // 0: mode default
    double t_tol = 1e-8;
    double s = 0.0;      // single-solve slope
    double R_out = 0.0;  // single-solve truncation radius (0: schedule max)
    std::string output_dir = ".";

    ContinuationOptions continuation() const;
};

// Parses and validates; throws std::runtime_error with a message on any
// malformed or inconsistent input.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

void write_config(const RunConfig& cfg, std::ostream& out);

void validate_config(const RunConfig& cfg);

} // namespace exmse
