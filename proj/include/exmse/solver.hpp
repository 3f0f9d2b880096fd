#pragma once

#include "exmse/grid.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <memory>

namespace exmse {

// Discrete candidate solution of M(u) = 0 on a truncated annular domain,
// with Dirichlet data 0 on the obstacle boundary and t on the outer sphere.
struct DiscreteField {
    GridPtr grid;
    double outer_value = 0.0;
    Eigen::VectorXd values; // one entry per unknown
    double residual_norm = 0.0;
    int newton_iterations = 0;
    bool converged = false;
};

// Caches the linear-solver factorization so that repeated solves on the same
// grid (Newton steps, bisection sweeps) reuse it as a preconditioner.
struct SolverWorkspace;
std::shared_ptr<SolverWorkspace> make_solver_workspace();

// Conservative second-order discretization of div(grad u / W),
// W = sqrt(1 + |grad u|^2): weight r^{n-1} in radial mode, y^{n-2} in
// axisymmetric meridian coordinates. Throws on NaN/Inf values.
Eigen::VectorXd assemble_residual(const DiscreteField& field);

// Damped Newton with the exact Jacobian. Converges when the residual
// max-norm drops below 1e-10 or the relative update below 1e-12; signals
// non-convergence after 50 iterations via field.converged.
DiscreteField newton_solve(const GridPtr& grid, double outer_value,
                           const DiscreteField* initial = nullptr,
                           SolverWorkspace* workspace = nullptr);

// Max of |grad u| over the obstacle boundary, one-sided second-order
// differences through the exact cut locations.
double boundary_gradient_max(const DiscreteField& field);

// Max of |grad u| over nodes, centered (cut-aware) differences.
double interior_gradient_max(const DiscreteField& field);

// Max of |grad u| over nodes within distance `band` of the outer sphere.
double outer_gradient_max(const DiscreteField& field, double band);

// Interpolates a solved field onto another grid (warm starts for grid
// sequencing). Radial sources may feed axisymmetric targets.
DiscreteField prolong_field(const DiscreteField& from, const GridPtr& to);

// Meridian sample with bilinear interpolation; positions inside the obstacle
// read 0 and positions beyond the outer sphere read t.
double field_value_at(const DiscreteField& field, double y, double z);

// Radial-mode sample by linear interpolation in r.
double radial_value_at(const DiscreteField& field, double r);

// CSV export: node coordinates, value, gradient norm.
void write_field_csv(const DiscreteField& field, std::ostream& out);

} // namespace exmse
