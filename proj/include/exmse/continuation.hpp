#pragma once

#include "exmse/geometry.hpp"
#include "exmse/solver.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace exmse {

// Decay model u(r) ~ c + a r^{2-n} fitted on the truncation-radius schedule.
struct DecayFit {
    double c = 0.0;        // limit height at infinity
    double a = 0.0;        // coefficient of r^{2-n}
    double exponent = 0.0; // free-exponent diagnostic (needs >= 3 radii)
    double residual = 0.0; // rms misfit of the two-parameter model
};

// One member u_s of the family: solved at every truncation radius of the
// schedule, kept at the largest, with the extrapolated limit height.
struct Leaf {
    double s = 0.0;
    std::vector<double> t; // accepted outer values, one per radius
    DiscreteField field;   // solution at the largest truncation radius
    DecayFit fit;
    bool monotone = true;  // gradient response monotone across brackets
    bool ok = false;
    int solves = 0;        // total boundary-value solves spent on this leaf
};

struct FoliationFamily {
    ExteriorDomain domain;
    std::vector<double> radii; // truncation schedule, strictly increasing
    double h = 0.0;
    std::vector<Leaf> leaves;  // in the order of the requested s grid
};

struct ContinuationOptions {
    std::vector<double> radii; // empty: circumradius * {4, 8, 16}
    double h = 0.0;            // 0: 1/512 radial, 1/8 axisymmetric
    double t_tol = 1e-8;       // bracket width tolerance on t
};

// Per-grid state reused across bisection sweeps and s-continuation: the
// grid, the cached factorization, and the last solved field (warm start).
struct OuterContext {
    GridPtr grid;
    std::shared_ptr<SolverWorkspace> workspace;
    DiscreteField last;
    bool has_last = false;
    double last_t = 0.0;
};

struct OuterValueResult {
    double t_k = 0.0; // signed like s
    DiscreteField field;
    bool monotone = true;
    int solves = 0;
};

// Discretization used for a domain truncated at R_out: radial for balls,
// axisymmetric meridian otherwise (mirrored when the obstacle allows).
GridPtr continuation_grid(const ExteriorDomain& domain, double R_out,
                          const ContinuationOptions& opt = {});

// Largest outer Dirichlet value whose solution keeps the obstacle-boundary
// gradient at |s|: bracketed root-find on t in [0, sigma_n * varrho + 1],
// warm-starting every solve from the previous one. Negative s solves the
// mirrored problem (odd symmetry is exact in floating point).
OuterValueResult maximal_outer_value(const ExteriorDomain& domain, double R_out,
                                     double s,
                                     const ContinuationOptions& opt = {},
                                     OuterContext* ctx = nullptr);

// Fits outer-boundary heights against c + a R^{2-n} over >= 2 truncation
// radii; with >= 3 also frees the exponent as a consistency diagnostic.
DecayFit asymptotic_constant(const std::vector<DiscreteField>& fields);

// Solves the whole family over the s grid (strictly increasing; any signs).
// Leaves are computed shallow-to-steep so warm starts chain in |s|, which
// also makes reflected grids bitwise-negated families.
FoliationFamily solve_family(const ExteriorDomain& domain,
                             const std::vector<double>& s_grid,
                             const ContinuationOptions& opt = {});

// Inverts the monotone map s -> c(s): returns s_c with |c(s_c) - c| < 1e-4.
// Requires 0 <= c < sigma_n * rho. A family may seed the initial guess.
double height_to_slope(const ExteriorDomain& domain, double c,
                       const ContinuationOptions& opt = {},
                       const FoliationFamily* hint = nullptr);

// Subsolution vanishing on the ball B_a around the obstacle and rising to c
// at infinity along the a-neck catenoid; lower barrier for the c-leaf.
struct BarrierSubsolution {
    Point center;
    double a = 0.0;
    int n = 0;
    double c = 0.0;
    double drop = 0.0; // sigma_n * a - c

    double radial(double r) const; // value at distance r from the center
    double operator()(const Point& x) const;
};

BarrierSubsolution barrier_subsolution(const ExteriorDomain& domain, double c,
                                       double a);

// Family summary + largest-radius node values, structured for reload.
void write_family_json(const FoliationFamily& family, std::ostream& out);
FoliationFamily read_family_json(std::istream& in);

} // namespace exmse
