#include "exmse/solver.hpp"

#include "dual.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace exmse {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using detail::Dual;

double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

// ---------------------------------------------------------------- residuals

// Value of the unknown across an edge, or the boundary constant it hits.
template <class S, class Val>
S edge_value(const GridEdge& e, const Val& val, double t) {
    switch (e.kind) {
    case EdgeKind::node: return val(e.neighbor);
    case EdgeKind::obstacle_cut: return S(0.0);
    case EdgeKind::outer_cut: return S(t);
    case EdgeKind::none: break;
    }
    throw std::logic_error("solver: edge without a value");
}

// Nonuniform centered derivative at a node along one coordinate, using the
// cut-aware neighbor values at distances alpha_plus*h and alpha_minus*h.
// Returns 0 on the axis (symmetry).
template <class S, class Val>
S node_derivative(const Grid& g, const GridNode& nd, const S& u_nd,
                  int d_plus, int d_minus, const Val& val, double t) {
    const GridEdge& ep = nd.edge[d_plus];
    const GridEdge& em = nd.edge[d_minus];
    if (em.kind == EdgeKind::none) return S(0.0);
    const double a = ep.alpha, b = em.alpha;
    const S up = edge_value<S>(ep, val, t);
    const S um = edge_value<S>(em, val, t);
    return (b * b * up - a * a * um + (a * a - b * b) * u_nd) /
           (a * b * (a + b) * g.h);
}

// Normalized flux du/dn / W through the face in direction d, derivative
// taken along the positive coordinate axis. d_t selects the transverse pair.
template <class S, class Val>
S face_flux(const Grid& g, const GridNode& nd, const S& u_nd, int d,
            int dt_plus, int dt_minus, const Val& val, double t) {
    const GridEdge& e = nd.edge[d];
    const S uv = edge_value<S>(e, val, t);
    const double sign = (d == 0 || d == 2) ? 1.0 : -1.0;
    const S dn = sign * (uv - u_nd) / (e.alpha * g.h);
    S tr = node_derivative<S>(g, nd, u_nd, dt_plus, dt_minus, val, t);
    if (e.kind == EdgeKind::node) {
        const GridNode& nb = g.nodes[static_cast<std::size_t>(e.neighbor)];
        const S u_nb = val(e.neighbor);
        tr = 0.5 * (tr + node_derivative<S>(g, nb, u_nb, dt_plus, dt_minus, val, t));
    } else {
        // Cut face: extrapolate the transverse derivative from this node and
        // the opposite neighbor to the midpoint of the cut segment; keeps the
        // face flux second-order consistent at boundary cells.
        const GridEdge& eo = nd.edge[d ^ 1];
        if (eo.kind == EdgeKind::node) {
            const GridNode& no = g.nodes[static_cast<std::size_t>(eo.neighbor)];
            const S u_no = val(eo.neighbor);
            const S tro = node_derivative<S>(g, no, u_no, dt_plus, dt_minus, val, t);
            tr = tr + 0.5 * e.alpha * (tr - tro);
        }
    }
    const S W = sqrt(1.0 + dn * dn + tr * tr);
    return dn / W;
}

template <class S, class Val>
S axisym_residual(const Grid& g, int id, const Val& val, double t) {
    const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
    const S u = val(id);
    const int m = g.n - 2;
    const double h = g.h;

    const S fE = face_flux<S>(g, nd, u, 0, 2, 3, val, t);
    S ry;
    if (nd.j == 0) {
        // Finite-volume axis cell [0, h/2]: (m+1) * flux * 2 / h.
        ry = (m + 1) * 2.0 / h * fE;
    } else {
        const double aE = nd.edge[0].alpha, aW = nd.edge[1].alpha;
        const S fW = face_flux<S>(g, nd, u, 1, 2, 3, val, t);
        const double wE = ipow(nd.y + 0.5 * aE * h, m);
        const double wW = ipow(nd.y - 0.5 * aW * h, m);
        ry = (wE * fE - wW * fW) * (2.0 / ((aE + aW) * h)) / ipow(nd.y, m);
    }

    const double aN = nd.edge[2].alpha, aS = nd.edge[3].alpha;
    const S fN = face_flux<S>(g, nd, u, 2, 0, 1, val, t);
    const S fS = face_flux<S>(g, nd, u, 3, 0, 1, val, t);
    const S rz = (fN - fS) * (2.0 / ((aN + aS) * h));

    return ry + rz;
}

// Radial residual at unknown k (1-based), u_0 = 0 and u_{count+1} = t.
template <class S, class Val>
S radial_residual(const Grid& g, int k, const Val& val, double t) {
    const double h = g.h;
    const double r = g.R_inner + (k + 1) * h; // unknown index k is 0-based
    const S uc = val(k);
    const S um = k == 0 ? S(0.0) : val(k - 1);
    const S up = k + 1 == g.radial_count ? S(t) : val(k + 1);
    const S dp = (up - uc) / h;
    const S dm = (uc - um) / h;
    const double wp = ipow(r + 0.5 * h, g.n - 1);
    const double wm = ipow(r - 0.5 * h, g.n - 1);
    const S fp = dp / sqrt(1.0 + dp * dp);
    const S fm = dm / sqrt(1.0 + dm * dm);
    return (wp * fp - wm * fm) / (h * ipow(r, g.n - 1));
}

Vec residual_vector(const Grid& g, const Vec& u, double t) {
    const int N = g.num_unknowns();
    Vec r(N);
    auto val = [&](int idx) { return u[idx]; };
    if (g.mode == GridMode::radial_1d) {
        for (int k = 0; k < N; ++k) r[k] = radial_residual<double>(g, k, val, t);
    } else {
        for (int k = 0; k < N; ++k) r[k] = axisym_residual<double>(g, k, val, t);
    }
    return r;
}

// Stencil of unknowns the residual row depends on (self, edge neighbors,
// and the neighbors' transverse neighbors), deduplicated; at most 9 entries.
int gather_stencil(const Grid& g, int id, int* slots) {
    int count = 0;
    auto add = [&](int idx) {
        if (idx < 0) return;
        for (int k = 0; k < count; ++k)
            if (slots[k] == idx) return;
        slots[count++] = idx;
    };
    add(id);
    const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
    for (int d = 0; d < 4; ++d) {
        const GridEdge& e = nd.edge[d];
        if (e.kind != EdgeKind::node) continue;
        add(e.neighbor);
        const GridNode& nb = g.nodes[static_cast<std::size_t>(e.neighbor)];
        const int t0 = d < 2 ? 2 : 0;
        for (int dt : {t0, t0 + 1}) {
            if (nb.edge[dt].kind == EdgeKind::node) add(nb.edge[dt].neighbor);
        }
    }
    return count;
}

void assemble_system(const Grid& g, const Vec& u, double t, Vec& r, SpMat& J) {
    const int N = g.num_unknowns();
    r.resize(N);
    std::vector<Eigen::Triplet<double>> trips;
    if (g.mode == GridMode::radial_1d) {
        trips.reserve(static_cast<std::size_t>(3 * N));
        for (int k = 0; k < N; ++k) {
            int slots[3];
            int ns = 0;
            for (int idx : {k - 1, k, k + 1})
                if (idx >= 0 && idx < N) slots[ns++] = idx;
            auto val = [&](int idx) {
                for (int s = 0; s < ns; ++s)
                    if (slots[s] == idx) return Dual<3>::seeded(u[idx], s);
                return Dual<3>(u[idx]);
            };
            const Dual<3> res = radial_residual<Dual<3>>(g, k, val, t);
            r[k] = res.v;
            for (int s = 0; s < ns; ++s)
                trips.emplace_back(k, slots[s], res.d[static_cast<std::size_t>(s)]);
        }
    } else {
        trips.reserve(static_cast<std::size_t>(9 * N));
        for (int k = 0; k < N; ++k) {
            int slots[9];
            const int ns = gather_stencil(g, k, slots);
            auto val = [&](int idx) {
                for (int s = 0; s < ns; ++s)
                    if (slots[s] == idx) return Dual<9>::seeded(u[idx], s);
                return Dual<9>(u[idx]);
            };
            const Dual<9> res = axisym_residual<Dual<9>>(g, k, val, t);
            r[k] = res.v;
            for (int s = 0; s < ns; ++s)
                trips.emplace_back(k, slots[s], res.d[static_cast<std::size_t>(s)]);
        }
    }
    J.resize(N, N);
    J.setFromTriplets(trips.begin(), trips.end());
}

// ------------------------------------------------------------ linear solves

int preconditioned_bicgstab(const SpMat& A, const Vec& b, Vec& x,
                            const std::function<Vec(const Vec&)>& minv,
                            double tol, int maxit, double& relres) {
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero(b.size());
        relres = 0.0;
        return 0;
    }
    Vec r = b - A * x;
    const Vec rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    Vec v = Vec::Zero(b.size()), p = Vec::Zero(b.size());
    relres = r.norm() / bnorm;
    for (int it = 1; it <= maxit; ++it) {
        const double rho1 = rhat.dot(r);
        if (rho1 == 0.0 || omega == 0.0) return -it;
        const double beta = (rho1 / rho) * (alpha / omega);
        p = r + beta * (p - omega * v);
        const Vec phat = minv(p);
        v = A * phat;
        const double denom = rhat.dot(v);
        if (denom == 0.0) return -it;
        alpha = rho1 / denom;
        const Vec s = r - alpha * v;
        if (s.norm() / bnorm < tol) {
            x += alpha * phat;
            relres = s.norm() / bnorm;
            return it;
        }
        const Vec shat = minv(s);
        const Vec tv = A * shat;
        const double tt = tv.dot(tv);
        if (tt == 0.0) return -it;
        omega = tv.dot(s) / tt;
        x += alpha * phat + omega * shat;
        r = s - omega * tv;
        relres = r.norm() / bnorm;
        if (relres < tol) return it;
        rho = rho1;
    }
    return -maxit - 1;
}

constexpr int kDirectLimit = 700000; // unknowns; above this use ILUT

} // namespace

struct SolverWorkspace {
    const Grid* grid = nullptr;
    bool has_factorization = false;
    bool use_ilut = false;
    Eigen::SparseLU<SpMat> lu;
    Eigen::IncompleteLUT<double> ilut;

    // False on a singular/failed factorization (e.g. a degenerate Newton
    // iterate); the workspace is unusable until the next successful call.
    bool factorize(const Grid& g, const SpMat& J) {
        grid = &g;
        has_factorization = false;
        use_ilut = g.num_unknowns() > kDirectLimit;
        if (use_ilut) {
            ilut.setDroptol(1e-4);
            ilut.setFillfactor(12);
            ilut.compute(J);
            if (ilut.info() != Eigen::Success) return false;
        } else {
            lu.compute(J);
            if (lu.info() != Eigen::Success) return false;
        }
        has_factorization = true;
        return true;
    }

    Vec apply(const Vec& x) const {
        if (use_ilut) return ilut.solve(x);
        return lu.solve(x);
    }
};

std::shared_ptr<SolverWorkspace> make_solver_workspace() {
    return std::make_shared<SolverWorkspace>();
}

Eigen::VectorXd assemble_residual(const DiscreteField& field) {
    if (!field.grid) throw std::invalid_argument("solver: field has no grid");
    if (!field.values.allFinite())
        throw std::invalid_argument("solver: field values must be finite");
    return residual_vector(*field.grid, field.values, field.outer_value);
}

namespace {

// One damped Newton run from the given iterate. The merit function is the
// raw residual max-norm: minimal surface fluxes saturate, so averaged norms
// can drop while individual cut-cell nodes blow up, and only the max-norm
// (dominated by the 1/(alpha h^2) cut rows) rejects such steps reliably.
bool newton_inner(const Grid& grid, double t, Vec& u, SolverWorkspace& ws,
                  int max_iter, int& iters, double& rnorm_out) {
    constexpr double kResTol = 1e-10;
    constexpr double kUpdateTol = 1e-12;
    constexpr int kMaxHalvings = 20;
    const int N = grid.num_unknowns();

    const bool trace = std::getenv("EXMSE_TRACE_NEWTON") != nullptr;
    auto now = [] {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };

    Vec r = residual_vector(grid, u, t);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    bool converged = rnorm < kResTol;
    SpMat J;

    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        double t0 = now();
        assemble_system(grid, u, t, r, J);
        double t1 = now();
        if (!ws.has_factorization && !ws.factorize(grid, J))
            break; // singular iterate: report non-convergence
        double t2 = now();

        // Inexact Newton: a 1e-4 relative linear tolerance still drives the
        // nonlinear residual to 1e-10 absolute (eta * ||r|| at the last step
        // is far below the target), while keeping Krylov iterations cheap.
        Vec delta = Vec::Zero(N);
        double relres = 0.0;
        int its = preconditioned_bicgstab(
            J, Vec(-r), delta, [&](const Vec& x) { return ws.apply(x); },
            1e-4, 200, relres);
        if (its > 30 || (its < 0 && relres > 1e-2)) {
            // Stale preconditioner: refactor from the current Jacobian.
            if (!ws.factorize(grid, J)) break;
            delta.setZero();
            its = preconditioned_bicgstab(
                J, Vec(-r), delta, [&](const Vec& x) { return ws.apply(x); },
                1e-4, 200, relres);
        }
        double t3 = now();
        if (trace)
            std::fprintf(stderr,
                         "newton t=%.4g it=%d rnorm=%.2e asm=%.2fs fact=%.2fs "
                         "krylov=%.2fs kits=%d relres=%.1e\n",
                         t, iter, rnorm, t1 - t0, t2 - t1, t3 - t2, its,
                         relres);
        if (its < 0 && relres > 1e-2) break; // breakdown: not converged

        double gamma = 1.0;
        Vec trial;
        Vec rt;
        bool improved = false;
        for (int halvings = 0; halvings <= kMaxHalvings; ++halvings) {
            trial = u + gamma * delta;
            rt = residual_vector(grid, trial, t);
            if (rt.lpNorm<Eigen::Infinity>() < rnorm) {
                improved = true;
                break;
            }
            gamma *= 0.5;
        }
        const double update = gamma * delta.lpNorm<Eigen::Infinity>() /
                              (1.0 + u.lpNorm<Eigen::Infinity>());
        if (!improved) {
            // Stagnation: residual at the rounding floor counts as converged
            // only via the update criterion.
            converged = update < kUpdateTol;
            break;
        }
        u = trial;
        r = rt;
        rnorm = rt.lpNorm<Eigen::Infinity>();
        ++iters;
        if (update < kUpdateTol || rnorm < kResTol) converged = true;
    }
    if (rnorm < kResTol) converged = true;
    rnorm_out = rnorm;
    return converged;
}

} // namespace

DiscreteField newton_solve(const GridPtr& grid, double outer_value,
                           const DiscreteField* initial,
                           SolverWorkspace* workspace) {
    if (!grid) throw std::invalid_argument("solver: null grid");
    if (!std::isfinite(outer_value))
        throw std::invalid_argument("solver: outer value must be finite");
    const int N = grid->num_unknowns();

    DiscreteField field;
    field.grid = grid;
    field.outer_value = outer_value;
    if (initial) {
        if (initial->values.size() != N)
            throw std::invalid_argument("solver: initial field size mismatch");
        field.values = initial->values;
    } else {
        field.values = Vec::Zero(N);
    }

    std::shared_ptr<SolverWorkspace> local;
    if (!workspace) {
        local = make_solver_workspace();
        workspace = local.get();
    }
    if (workspace->grid != grid.get()) workspace->has_factorization = false;

    double rnorm = 0.0;
    bool ok = newton_inner(*grid, outer_value, field.values, *workspace, 50,
                           field.newton_iterations, rnorm);
    if (!ok) {
        // Far from the solution the minimal surface fluxes saturate (each is
        // bounded by 1), so the residual norm is a useless merit function and
        // damping cannot rescue Newton. Continuation in the outer value keeps
        // every sub-solve inside the Newton basin of the previous one: u = 0
        // is exact for t = 0 and the solution depends smoothly on t.
        for (int stages = 4; stages <= 64 && !ok; stages *= 2) {
            field.values.setZero();
            field.newton_iterations = 0;
            ok = true;
            for (int k = 1; k <= stages; ++k) {
                int its = 0;
                const bool sub =
                    newton_inner(*grid, outer_value * k / stages, field.values,
                                 *workspace, 25, its, rnorm);
                field.newton_iterations += its;
                if (!sub) {
                    ok = false;
                    break;
                }
            }
        }
    }
    field.converged = ok;
    field.residual_norm = rnorm;
    return field;
}

// ------------------------------------------------------------- diagnostics

namespace {

// Meridian gradient components at a node, cut-aware centered differences.
void node_gradient(const Grid& g, const Vec& u, double t, int id, double& gy,
                   double& gz) {
    const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
    auto val = [&](int idx) { return u[idx]; };
    const double uc = u[id];
    gy = node_derivative<double>(g, nd, uc, 0, 1, val, t);
    gz = node_derivative<double>(g, nd, uc, 2, 3, val, t);
}

// Outward unit normal of the obstacle at a meridian boundary point.
void obstacle_normal(const ExteriorDomain& dom, double y, double z, double step,
                     double& ny, double& nz) {
    const double dy = meridian_signed_distance(dom, y + step, z) -
                      meridian_signed_distance(dom, y - step, z);
    const double dz = meridian_signed_distance(dom, y, z + step) -
                      meridian_signed_distance(dom, y, z - step);
    const double norm = std::hypot(dy, dz);
    ny = dy / norm;
    nz = dz / norm;
}

} // namespace

double boundary_gradient_max(const DiscreteField& field) {
    const Grid& g = *field.grid;
    const Vec& u = field.values;
    if (g.mode == GridMode::radial_1d) {
        if (g.radial_count < 2) throw std::logic_error("solver: grid too small");
        return std::fabs((4.0 * u[0] - u[1]) / (2.0 * g.h));
    }
    static const double ey[4] = {1.0, -1.0, 0.0, 0.0};
    static const double ez[4] = {0.0, 0.0, 1.0, -1.0};
    double best = 0.0;
    const double step = 1e-6 * (1.0 + g.domain.length_scale());
    for (int id = 0; id < g.num_unknowns(); ++id) {
        const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
        for (int d = 0; d < 4; ++d) {
            const GridEdge& e = nd.edge[d];
            if (e.kind != EdgeKind::obstacle_cut) continue;
            const double a = e.alpha;
            const double by = nd.y + a * g.h * ey[d];
            const double bz = nd.z + a * g.h * ez[d];
            // Direction from the boundary point into the domain.
            const double ty = -ey[d], tz = -ez[d];
            double ny, nz;
            obstacle_normal(g.domain, by, bz, step, ny, nz);
            const double cosang = std::fabs(ny * ty + nz * tz);
            if (cosang < 0.2) continue;
            // One-sided derivative along the grid line through the cut,
            // second order when the next collinear node exists.
            const int opp = d ^ 1;
            double deriv;
            if (nd.edge[opp].kind == EdgeKind::node) {
                const double ud = u[nd.edge[opp].neighbor];
                deriv = (u[id] * (a + 1.0) * (a + 1.0) - ud * a * a) /
                        (a * (a + 1.0) * g.h);
            } else {
                deriv = u[id] / (a * g.h);
            }
            best = std::max(best, std::fabs(deriv) / cosang);
        }
    }
    return best;
}

double interior_gradient_max(const DiscreteField& field) {
    const Grid& g = *field.grid;
    const Vec& u = field.values;
    double best = 0.0;
    if (g.mode == GridMode::radial_1d) {
        for (int k = 0; k < g.radial_count; ++k) {
            const double um = k == 0 ? 0.0 : u[k - 1];
            const double up =
                k + 1 == g.radial_count ? field.outer_value : u[k + 1];
            best = std::max(best, std::fabs(up - um) / (2.0 * g.h));
        }
        return best;
    }
    for (int id = 0; id < g.num_unknowns(); ++id) {
        double gy, gz;
        node_gradient(g, u, field.outer_value, id, gy, gz);
        best = std::max(best, std::hypot(gy, gz));
    }
    return best;
}

double outer_gradient_max(const DiscreteField& field, double band) {
    const Grid& g = *field.grid;
    const Vec& u = field.values;
    double best = 0.0;
    if (g.mode == GridMode::radial_1d) {
        for (int k = 0; k < g.radial_count; ++k) {
            const double r = g.R_inner + (k + 1) * g.h;
            if (g.R_out - r > band) continue;
            const double um = k == 0 ? 0.0 : u[k - 1];
            const double up =
                k + 1 == g.radial_count ? field.outer_value : u[k + 1];
            best = std::max(best, std::fabs(up - um) / (2.0 * g.h));
        }
        return best;
    }
    for (int id = 0; id < g.num_unknowns(); ++id) {
        const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
        const double r = std::hypot(nd.y, nd.z - g.z_out);
        if (g.R_out - r > band) continue;
        double gy, gz;
        node_gradient(g, u, field.outer_value, id, gy, gz);
        best = std::max(best, std::hypot(gy, gz));
    }
    return best;
}

DiscreteField prolong_field(const DiscreteField& from, const GridPtr& to) {
    if (!to) throw std::invalid_argument("solver: null target grid");
    DiscreteField out;
    out.grid = to;
    out.outer_value = from.outer_value;
    const int N = to->num_unknowns();
    out.values.resize(N);
    if (to->mode == GridMode::radial_1d) {
        if (from.grid->mode != GridMode::radial_1d)
            throw std::invalid_argument("solver: cannot prolong 2d onto radial");
        for (int k = 0; k < N; ++k)
            out.values[k] =
                radial_value_at(from, to->R_inner + (k + 1) * to->h);
        return out;
    }
    const bool radial_src = from.grid->mode == GridMode::radial_1d;
    const Grid& src = *from.grid;
    // Bilinear interpolation that drops obstacle-interior corners and
    // renormalizes: reading the hard 0 stored inside the obstacle would
    // poison warm starts at cut cells.
    auto sample = [&](double y, double z) {
        y = std::fabs(y);
        if (src.mirror_z) z = src.z_out + std::fabs(z - src.z_out);
        const double fy = y / src.h;
        const double fz = (z - src.z_out) / src.h;
        const int j0 = static_cast<int>(std::floor(fy));
        const int i0 = static_cast<int>(std::floor(fz));
        const double wy = fy - j0, wz = fz - i0;
        double acc = 0.0, wsum = 0.0;
        const double w[4] = {(1.0 - wy) * (1.0 - wz), wy * (1.0 - wz),
                             (1.0 - wy) * wz, wy * wz};
        const int jj[4] = {j0, j0 + 1, j0, j0 + 1};
        const int ii[4] = {i0, i0, i0 + 1, i0 + 1};
        for (int c = 0; c < 4; ++c) {
            int i = ii[c], j = jj[c];
            if (j < 0) j = -j;
            if (src.mirror_z && i < 0) i = -i;
            const int sid = src.node_index(i, j);
            if (sid >= 0) {
                acc += w[c] * from.values[sid];
                wsum += w[c];
                continue;
            }
            const double py = j * src.h, pz = src.z_out + i * src.h;
            const double rr = py * py + (pz - src.z_out) * (pz - src.z_out);
            if (rr >= src.R_out * src.R_out) {
                acc += w[c] * from.outer_value;
                wsum += w[c];
            }
            // Obstacle-interior corner: dropped.
        }
        return wsum > 0.0 ? acc / wsum : 0.0;
    };
    for (int id = 0; id < N; ++id) {
        const GridNode& nd = to->nodes[static_cast<std::size_t>(id)];
        out.values[id] =
            radial_src
                ? radial_value_at(from, std::hypot(nd.y, nd.z - to->z_out))
                : sample(nd.y, nd.z);
    }
    return out;
}

double field_value_at(const DiscreteField& field, double y, double z) {
    const Grid& g = *field.grid;
    if (g.mode != GridMode::axisymmetric_2d)
        throw std::logic_error("solver: meridian sampling needs a 2d grid");
    y = std::fabs(y);
    if (g.mirror_z) z = g.z_out + std::fabs(z - g.z_out);
    auto lookup = [&](int i, int j) {
        if (j < 0) j = -j;
        if (g.mirror_z && i < 0) i = -i;
        const int id = g.node_index(i, j);
        if (id >= 0) return field.values[id];
        const double py = j * g.h, pz = g.z_out + i * g.h;
        const double rr = py * py + (pz - g.z_out) * (pz - g.z_out);
        if (rr >= g.R_out * g.R_out) return field.outer_value;
        return 0.0; // inside the obstacle
    };
    const double fy = y / g.h;
    const double fz = (z - g.z_out) / g.h;
    const int j0 = static_cast<int>(std::floor(fy));
    const int i0 = static_cast<int>(std::floor(fz));
    const double wy = fy - j0, wz = fz - i0;
    return (1.0 - wy) * (1.0 - wz) * lookup(i0, j0) +
           wy * (1.0 - wz) * lookup(i0, j0 + 1) +
           (1.0 - wy) * wz * lookup(i0 + 1, j0) +
           wy * wz * lookup(i0 + 1, j0 + 1);
}

double radial_value_at(const DiscreteField& field, double r) {
    const Grid& g = *field.grid;
    if (g.mode != GridMode::radial_1d)
        throw std::logic_error("solver: radial sampling needs a 1d grid");
    if (r <= g.R_inner) return 0.0;
    if (r >= g.R_out) return field.outer_value;
    const double f = (r - g.R_inner) / g.h;
    const int k = static_cast<int>(std::floor(f));
    const double w = f - k;
    auto at = [&](int idx) {
        if (idx <= 0) return 0.0;
        if (idx > g.radial_count) return field.outer_value;
        return field.values[idx - 1];
    };
    return (1.0 - w) * at(k) + w * at(k + 1);
}

void write_field_csv(const DiscreteField& field, std::ostream& out) {
    const Grid& g = *field.grid;
    out.precision(17);
    if (g.mode == GridMode::radial_1d) {
        out << "r,u,grad_norm\n";
        for (int k = 0; k < g.radial_count; ++k) {
            const double r = g.R_inner + (k + 1) * g.h;
            const double um = k == 0 ? 0.0 : field.values[k - 1];
            const double up = k + 1 == g.radial_count ? field.outer_value
                                                      : field.values[k + 1];
            out << r << ',' << field.values[k] << ','
                << std::fabs(up - um) / (2.0 * g.h) << '\n';
        }
        return;
    }
    out << "y,z,u,grad_norm\n";
    for (int id = 0; id < g.num_unknowns(); ++id) {
        const GridNode& nd = g.nodes[static_cast<std::size_t>(id)];
        double gy, gz;
        node_gradient(g, field.values, field.outer_value, id, gy, gz);
        out << nd.y << ',' << nd.z << ',' << field.values[id] << ','
            << std::hypot(gy, gz) << '\n';
    }
}

} // namespace exmse
