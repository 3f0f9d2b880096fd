#pragma once

#include "exmse/geometry.hpp"

#include <memory>
#include <vector>

namespace exmse {

// Truncated computational domains: the exterior of the obstacle intersected
// with a ball of radius R_out. Two modes:
//   radial_1d:        uniform grid in r on [R, R_out] (ball obstacles only)
//   axisymmetric_2d:  uniform meridian grid in (y, z), y = distance to the
//                     symmetry axis, z = axial coordinate from the obstacle
//                     center; boundaries cut grid edges at exact locations.
enum class GridMode { radial_1d, axisymmetric_2d };

enum class EdgeKind : signed char {
    none,         // no edge in this direction (axis / mirror handled apart)
    node,         // neighbor is another unknown
    obstacle_cut, // edge crosses the obstacle boundary (value 0)
    outer_cut,    // edge crosses the outer sphere (value t)
};

struct GridEdge {
    EdgeKind kind = EdgeKind::none;
    int neighbor = -1;  // unknown index when kind == node
    double alpha = 1.0; // fraction of h at which the edge is cut, in (0, 1]
};

// Edge directions: 0 = +y (E), 1 = -y (W), 2 = +z (N), 3 = -z (S).
struct GridNode {
    int i = 0; // z index
    int j = 0; // y index
    double y = 0.0, z = 0.0;
    GridEdge edge[4];
};

struct Grid {
    GridMode mode;
    ExteriorDomain domain;
    int n;        // ambient dimension
    double h;     // actual spacing (radial mode snaps to divide the annulus)
    double R_out;
    double z_out = 0.0; // axial center of the outer truncation sphere
    bool mirror_z = false;

    // axisymmetric_2d
    std::vector<GridNode> nodes;
    int i_min = 0, i_max = 0, j_max = 0;
    std::vector<int> index; // (i - i_min) * (j_max + 1) + j -> unknown or -1

    // radial_1d: unknowns at r = R_inner + k h, k = 1..radial_count
    double R_inner = 0.0;
    int radial_count = 0;

    int num_unknowns() const;
    int node_index(int i, int j) const; // -1 when absent / inactive
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_radial_grid(double R, double R_out, double h, int n);

// mirror_z halves the grid to z >= z_out with a reflection condition on the
// mirror plane; requires the obstacle to be symmetric about that plane.
GridPtr make_axisymmetric_grid(const ExteriorDomain& domain, double R_out,
                               double h, bool mirror_z = false);

} // namespace exmse
