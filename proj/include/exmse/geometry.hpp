#pragma once

#include <Eigen/Core>

#include <vector>

namespace exmse {

using Point = Eigen::VectorXd;

enum class DomainKind { ball, prolate_spheroid, two_ball_union };

// Exterior domain Omega = R^n \ closure(Lambda), n >= 3, where Lambda is a
// bounded axisymmetric obstacle. Three analytically controllable kinds:
//   ball:             params = {R}
//   prolate_spheroid: params = {a, b}, semi-axis a along `axis`, b transverse
//   two_ball_union:   params = {r1, r2, d}, centers at `center` and
//                     `center` + d * `axis`
struct ExteriorDomain {
    DomainKind kind;
    int dim;
    std::vector<double> params;
    Point center;
    Point axis; // unit vector

    static ExteriorDomain make_ball(int n, double radius,
                                    const Point& center = Point());
    static ExteriorDomain make_prolate_spheroid(int n, double a, double b,
                                                const Point& center = Point(),
                                                const Point& axis = Point());
    static ExteriorDomain make_two_ball_union(int n, double r1, double r2,
                                              double separation,
                                              const Point& center = Point(),
                                              const Point& axis = Point());

    // Largest parameter; used as the length scale for tolerances.
    double length_scale() const;
};

struct GeometryRadii {
    double rho;    // interior sphere condition radius
    double varrho; // circumradius of the boundary
};

struct EnclosingBall {
    Point center;
    double radius;
};

// Signed distance to the obstacle boundary: negative inside Lambda, zero on
// the boundary, positive in Omega. Exact for balls and their union,
// Newton/bisection-projected for the spheroid. 1-Lipschitz.
double signed_distance(const ExteriorDomain& dom, const Point& x);

// Unit outward normal (pointing into Omega) at a boundary point.
Point boundary_normal(const ExteriorDomain& dom, const Point& x);

// Deterministic quasi-uniform sample of the obstacle boundary. The first
// samples are the parametrization endpoints (poles along the axis); the rest
// come from a Halton-driven direction sequence. For the two-ball union,
// points of one sphere lying strictly inside the other ball are rejected.
std::vector<Point> boundary_sample(const ExteriorDomain& dom, int count);

// Exact minimal enclosing ball of a finite point set (Welzl's algorithm with
// deterministic shuffling).
EnclosingBall minimal_enclosing_ball(const std::vector<Point>& pts);

// Minimal enclosing ball of the obstacle boundary, sample density doubled
// until the radius changes by less than 1e-8.
EnclosingBall enclosing_ball(const ExteriorDomain& dom);

// Largest rho such that every sampled boundary point admits a tangent ball
// of radius rho contained in the obstacle. Per-point maximization by
// bisection along the inward normal, infimum over the sample, sample size
// doubled until stable.
double interior_sphere_radius(const ExteriorDomain& dom);

// Radius of enclosing_ball(dom).
double circumradius(const ExteriorDomain& dom);

GeometryRadii geometry_radii(const ExteriorDomain& dom);

// Obstacle cross-section in the axis frame: y = transverse radius (>= 0),
// z = axial coordinate measured from dom.center. Signed as signed_distance.
double meridian_signed_distance(const ExteriorDomain& dom, double y, double z);

// Uniform rescaling of the obstacle by factor k about its center.
ExteriorDomain scaled(const ExteriorDomain& dom, double k);

} // namespace exmse
