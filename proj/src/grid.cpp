#include "exmse/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace exmse {

namespace {

constexpr double kAlphaFloor = 1e-6;

// Closed-form axial center and radius of the outer truncation sphere.
void outer_sphere(const ExteriorDomain& dom, double& z_out, double& varrho) {
    switch (dom.kind) {
    case DomainKind::ball:
        z_out = 0.0;
        varrho = dom.params[0];
        return;
    case DomainKind::prolate_spheroid:
        z_out = 0.0;
        varrho = dom.params[0];
        return;
    case DomainKind::two_ball_union: {
        const double r1 = dom.params[0], r2 = dom.params[1], d = dom.params[2];
        z_out = 0.5 * (d + r2 - r1);
        varrho = 0.5 * (d + r1 + r2);
        return;
    }
    }
    throw std::logic_error("grid: unknown domain kind");
}

// Exact cut fraction of the edge p -> p + h e against the outer sphere.
double outer_cut_alpha(double y, double z, double ey, double ez, double h,
                       double z_out, double R_out) {
    const double qy = y, qz = z - z_out;
    const double qe = qy * ey + qz * ez;
    const double disc = qe * qe - (qy * qy + qz * qz - R_out * R_out);
    const double step = -qe + std::sqrt(std::max(disc, 0.0));
    double alpha = step / h;
    if (alpha < kAlphaFloor) alpha = kAlphaFloor;
    if (alpha > 1.0) alpha = 1.0;
    return alpha;
}

// Bisected cut fraction against the obstacle boundary.
double obstacle_cut_alpha(const ExteriorDomain& dom, double y, double z,
                          double ey, double ez, double h) {
    double lo = 0.0, hi = 1.0; // msd > 0 at lo, <= 0 at hi
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (meridian_signed_distance(dom, y + mid * h * ey, z + mid * h * ez) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double alpha = 0.5 * (lo + hi);
    if (alpha < kAlphaFloor) alpha = kAlphaFloor;
    return alpha;
}

} // namespace

int Grid::num_unknowns() const {
    return mode == GridMode::radial_1d ? radial_count
                                       : static_cast<int>(nodes.size());
}

int Grid::node_index(int i, int j) const {
    if (i < i_min || i > i_max || j < 0 || j > j_max) return -1;
    return index[static_cast<std::size_t>(i - i_min) * (j_max + 1) + j];
}

GridPtr make_radial_grid(double R, double R_out, double h, int n) {
    if (!(R > 0.0)) throw std::invalid_argument("grid: R must be positive");
    if (!(R_out > R)) throw std::invalid_argument("grid: R_out must exceed R");
    if (!(h > 0.0)) throw std::invalid_argument("grid: h must be positive");
    if (n < 3) throw std::invalid_argument("grid: dimension must be >= 3");

    auto g = std::make_shared<Grid>();
    g->mode = GridMode::radial_1d;
    g->domain = ExteriorDomain::make_ball(n, R);
    g->n = n;
    const int count = std::max(4, static_cast<int>(std::lround((R_out - R) / h)));
    g->h = (R_out - R) / count;
    g->R_out = R_out;
    g->R_inner = R;
    g->radial_count = count - 1;
    return g;
}

GridPtr make_axisymmetric_grid(const ExteriorDomain& domain, double R_out,
                               double h, bool mirror_z) {
    if (!(h > 0.0)) throw std::invalid_argument("grid: h must be positive");

    auto g = std::make_shared<Grid>();
    g->mode = GridMode::axisymmetric_2d;
    g->domain = domain;
    g->n = domain.dim;
    g->h = h;
    g->R_out = R_out;
    g->mirror_z = mirror_z;

    double varrho = 0.0;
    outer_sphere(domain, g->z_out, varrho);
    if (!(R_out > varrho))
        throw std::invalid_argument("grid: R_out must exceed the circumradius");
    if (mirror_z) {
        // The obstacle must be symmetric about z = z_out.
        for (double y : {0.0, 0.3 * varrho, 0.8 * varrho}) {
            for (double dz : {0.2 * varrho, 0.9 * varrho}) {
                const double a = meridian_signed_distance(domain, y, g->z_out + dz);
                const double b = meridian_signed_distance(domain, y, g->z_out - dz);
                if (std::fabs(a - b) > 1e-9 * (1.0 + varrho))
                    throw std::invalid_argument(
                        "grid: mirror_z requires a z-symmetric obstacle");
            }
        }
    }

    const int reach = static_cast<int>(std::ceil(R_out / h)) + 1;
    g->j_max = reach;
    g->i_max = reach;
    g->i_min = mirror_z ? 0 : -reach;

    const std::size_t rows = static_cast<std::size_t>(g->i_max - g->i_min + 1);
    const std::size_t cols = static_cast<std::size_t>(g->j_max + 1);
    g->index.assign(rows * cols, -1);

    auto active = [&](int i, int j) {
        const double y = j * h;
        const double z = g->z_out + i * h;
        const double ry = y, rz = z - g->z_out;
        if (ry * ry + rz * rz >= R_out * R_out) return false;
        return meridian_signed_distance(domain, y, z) > 0.0;
    };

    int count = 0;
    for (int i = g->i_min; i <= g->i_max; ++i) {
        for (int j = 0; j <= g->j_max; ++j) {
            if (active(i, j))
                g->index[static_cast<std::size_t>(i - g->i_min) * cols + j] =
                    count++;
        }
    }

    g->nodes.resize(static_cast<std::size_t>(count));
    static const int di[4] = {0, 0, 1, -1};
    static const int dj[4] = {1, -1, 0, 0};
    static const double ey[4] = {1.0, -1.0, 0.0, 0.0};
    static const double ez[4] = {0.0, 0.0, 1.0, -1.0};

    for (int i = g->i_min; i <= g->i_max; ++i) {
        for (int j = 0; j <= g->j_max; ++j) {
            const int id = g->node_index(i, j);
            if (id < 0) continue;
            GridNode& node = g->nodes[static_cast<std::size_t>(id)];
            node.i = i;
            node.j = j;
            node.y = j * h;
            node.z = g->z_out + i * h;
            for (int d = 0; d < 4; ++d) {
                GridEdge& e = node.edge[d];
                if (d == 1 && j == 0) {
                    e.kind = EdgeKind::none; // axis: no west edge
                    continue;
                }
                if (mirror_z && d == 3 && i == 0) {
                    continue; // filled from the north edge below
                }
                const int ni = i + di[d], nj = j + dj[d];
                const int nid = g->node_index(ni, nj);
                if (nid >= 0) {
                    e.kind = EdgeKind::node;
                    e.neighbor = nid;
                    e.alpha = 1.0;
                    continue;
                }
                const double ny = nj * h;
                const double nz = g->z_out + ni * h;
                const double ry = ny, rz = nz - g->z_out;
                if (ry * ry + rz * rz >= R_out * R_out) {
                    e.kind = EdgeKind::outer_cut;
                    e.alpha = outer_cut_alpha(node.y, node.z, ey[d], ez[d], h,
                                              g->z_out, R_out);
                } else {
                    e.kind = EdgeKind::obstacle_cut;
                    e.alpha =
                        obstacle_cut_alpha(domain, node.y, node.z, ey[d], ez[d], h);
                }
            }
            if (mirror_z && i == 0) {
                // Reflection across the mirror plane: the south edge mirrors
                // the north one (node neighbor or cut alike).
                node.edge[3] = node.edge[2];
            }
        }
    }
    return g;
}

} // namespace exmse
