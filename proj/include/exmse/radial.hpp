#pragma once

#include <iosfwd>
#include <vector>

namespace exmse {

// Exact solutions on the exterior of a ball: shifted catenoids
// u(r) = v_lambda(r) - v_lambda(R). These are the ground-truth oracles for
// the discrete solver and the continuation machinery.
struct RadialProfile {
    double R;       // ball radius
    double s;       // slope parameter, s = tan(gamma)
    double lambda;  // neck radius of the underlying catenoid (0 for s = 0)
    int n;          // dimension
    double c;       // limit height u(inf)
    std::vector<std::pair<double, double>> samples; // (r, u)

    double value(double r) const;  // u(r), exact quadrature
    double slope(double r) const;  // |u'(r)|-signed: du/dr
};

// The bounded exterior solution with max boundary gradient |s|; negative s
// by odd reflection u_{-s} = -u_s. Sample grid is geometric in r, clustered
// at R, out to r_max (default 16 R).
RadialProfile radial_solution(double R, double s, int n,
                              int sample_count = 512, double r_max_factor = 16.0);

// Maximal outer Dirichlet value on the annulus {R <= r <= K} under the
// gradient cap s: t_k = v_lambda(K) - v_lambda(R), lambda = neck_for_slope.
double radial_tk(double R, double K, double s, int n);

// CSV export: columns r,u,slope.
void write_profile_csv(const RadialProfile& profile, std::ostream& out);

} // namespace exmse
