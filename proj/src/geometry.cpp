#include "exmse/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace exmse {

namespace {

Point default_center(int n) { return Point::Zero(n); }

Point default_axis(int n) {
    Point a = Point::Zero(n);
    a[0] = 1.0;
    return a;
}

void validate_frame(ExteriorDomain& dom) {
    if (dom.dim < 3) {
        throw std::invalid_argument("ExteriorDomain: dimension must be >= 3");
    }
    for (double p : dom.params) {
        if (!(p > 0.0)) {
            throw std::invalid_argument("ExteriorDomain: parameters must be positive");
        }
    }
    if (dom.center.size() == 0) dom.center = default_center(dom.dim);
    if (dom.axis.size() == 0) dom.axis = default_axis(dom.dim);
    if (dom.center.size() != dom.dim || dom.axis.size() != dom.dim) {
        throw std::invalid_argument("ExteriorDomain: center/axis dimension mismatch");
    }
    const double norm = dom.axis.norm();
    if (norm < 1e-12) {
        throw std::invalid_argument("ExteriorDomain: axis must be nonzero");
    }
    dom.axis /= norm;
}

// --- point-to-ellipse distance (Eberly's robust bisection) -----------------

double robust_length(double a, double b) { return std::hypot(a, b); }

double ellipse_root(double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = (g < 0.0) ? 0.0 : robust_length(n0, z1) - 1.0;
    double s = 0.0;
    for (int i = 0; i < 200; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double ratio0 = n0 / (s + r0);
        const double ratio1 = z1 / (s + 1.0);
        g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if (g > 0.0) {
            s0 = s;
        } else if (g < 0.0) {
            s1 = s;
        } else {
            break;
        }
    }
    return s;
}

// Unsigned distance from (y0, y1), y0, y1 >= 0, to the ellipse with
// semi-axes e0 >= e1 > 0.
double distance_point_ellipse(double e0, double e1, double y0, double y1) {
    // Snap near-axis points onto the axes: the generic root parametrization
    // loses all precision when a coordinate is at round-off scale (the root
    // approaches an endpoint of its bracket), while the axis branches are
    // exact. The snap perturbs the distance by O(snap^2 / e1).
    if (y1 < 1e-12 * e1) y1 = 0.0;
    if (y0 < 1e-12 * e0) y0 = 0.0;
    if (y1 > 0.0) {
        if (y0 > 0.0) {
            const double z0 = y0 / e0;
            const double z1 = y1 / e1;
            const double g = z0 * z0 + z1 * z1 - 1.0;
            if (g != 0.0) {
                const double r0 = (e0 / e1) * (e0 / e1);
                const double sbar = ellipse_root(r0, z0, z1, g);
                const double x0 = r0 * y0 / (sbar + r0);
                const double x1 = y1 / (sbar + 1.0);
                return std::hypot(x0 - y0, x1 - y1);
            }
            return 0.0;
        }
        return std::fabs(y1 - e1);
    }
    const double numer0 = e0 * y0;
    const double denom0 = e0 * e0 - e1 * e1;
    if (numer0 < denom0) {
        const double xde0 = numer0 / denom0;
        const double x0 = e0 * xde0;
        const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
        return std::hypot(x0 - y0, x1);
    }
    return std::fabs(y0 - e0);
}

// --- deterministic low-discrepancy directions ------------------------------

constexpr int kPrimes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                             23, 29, 31, 37, 41, 43, 47, 53};

double halton(std::uint64_t index, int base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Unit direction in R^n from Halton-driven Box-Muller normals.
Point halton_direction(std::uint64_t index, int n) {
    Point g(n);
    const int pairs = (n + 1) / 2;
    for (int k = 0; k < pairs; ++k) {
        double u1 = halton(index + 1, kPrimes[(2 * k) % 16]);
        double u2 = halton(index + 1, kPrimes[(2 * k + 1) % 16]);
        u1 = std::max(u1, 1e-14);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        g[2 * k] = rad * std::cos(ang);
        if (2 * k + 1 < n) g[2 * k + 1] = rad * std::sin(ang);
    }
    const double norm = g.norm();
    if (norm < 1e-12) {
        Point e = Point::Zero(n);
        e[n - 1] = 1.0;
        return e;
    }
    return g / norm;
}

// Orthonormal frame whose first column is the domain axis. Sampling
// directions are drawn in this frame so the sample pattern is rigid-motion
// covariant and the computed radii are exactly invariant.
Eigen::MatrixXd axis_basis(const ExteriorDomain& dom) {
    const int n = dom.dim;
    Eigen::MatrixXd a(n, 1);
    a.col(0) = dom.axis;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.col(0).dot(dom.axis) < 0.0) q = -q;
    return q;
}

std::pair<double, double> axis_frame(const ExteriorDomain& dom, const Point& x) {
    const Point v = x - dom.center;
    const double zeta = v.dot(dom.axis);
    const double eta = (v - zeta * dom.axis).norm();
    return {eta, zeta};
}

} // namespace

// --- construction ----------------------------------------------------------

ExteriorDomain ExteriorDomain::make_ball(int n, double radius,
                                         const Point& center) {
    ExteriorDomain d{DomainKind::ball, n, {radius}, center, Point()};
    validate_frame(d);
    return d;
}

ExteriorDomain ExteriorDomain::make_prolate_spheroid(int n, double a, double b,
                                                     const Point& center,
                                                     const Point& axis) {
    if (a < b) {
        throw std::invalid_argument("prolate spheroid: requires a >= b");
    }
    ExteriorDomain d{DomainKind::prolate_spheroid, n, {a, b}, center, axis};
    validate_frame(d);
    return d;
}

ExteriorDomain ExteriorDomain::make_two_ball_union(int n, double r1, double r2,
                                                   double separation,
                                                   const Point& center,
                                                   const Point& axis) {
    ExteriorDomain d{DomainKind::two_ball_union, n, {r1, r2, separation},
                     center, axis};
    validate_frame(d);
    if (separation >= r1 + r2) {
        throw std::invalid_argument(
            "two_ball_union: balls must overlap (separation < r1 + r2)");
    }
    return d;
}

double ExteriorDomain::length_scale() const {
    return *std::max_element(params.begin(), params.end());
}

// --- distances and normals -------------------------------------------------

double meridian_signed_distance(const ExteriorDomain& dom, double y, double z) {
    switch (dom.kind) {
    case DomainKind::ball:
        return std::hypot(y, z) - dom.params[0];
    case DomainKind::prolate_spheroid: {
        const double a = dom.params[0];
        const double b = dom.params[1];
        const double q = (z / a) * (z / a) + (y / b) * (y / b);
        const double dist = distance_point_ellipse(a, b, std::fabs(z), y);
        return q >= 1.0 ? dist : -dist;
    }
    case DomainKind::two_ball_union: {
        const double d1 = std::hypot(y, z) - dom.params[0];
        const double d2 = std::hypot(y, z - dom.params[2]) - dom.params[1];
        return std::min(d1, d2);
    }
    }
    throw std::logic_error("unknown domain kind");
}

double signed_distance(const ExteriorDomain& dom, const Point& x) {
    const auto [eta, zeta] = axis_frame(dom, x);
    return meridian_signed_distance(dom, eta, zeta);
}

Point boundary_normal(const ExteriorDomain& dom, const Point& x) {
    const Point v = x - dom.center;
    switch (dom.kind) {
    case DomainKind::ball: {
        const double r = v.norm();
        if (r < 1e-14) throw std::domain_error("boundary_normal: center point");
        return v / r;
    }
    case DomainKind::prolate_spheroid: {
        const double a = dom.params[0];
        const double b = dom.params[1];
        const double zeta = v.dot(dom.axis);
        const Point tau = v - zeta * dom.axis;
        Point g = (zeta / (a * a)) * dom.axis + tau / (b * b);
        const double norm = g.norm();
        if (norm < 1e-14) throw std::domain_error("boundary_normal: center point");
        return g / norm;
    }
    case DomainKind::two_ball_union: {
        const Point c2 = dom.center + dom.params[2] * dom.axis;
        const double d1 = (x - dom.center).norm() - dom.params[0];
        const double d2 = (x - c2).norm() - dom.params[1];
        const Point w = (d1 <= d2) ? (x - dom.center) : (x - c2);
        const double r = w.norm();
        if (r < 1e-14) throw std::domain_error("boundary_normal: center point");
        return w / r;
    }
    }
    throw std::logic_error("unknown domain kind");
}

// --- boundary sampling -----------------------------------------------------

std::vector<Point> boundary_sample(const ExteriorDomain& dom, int count) {
    if (count < 1) throw std::invalid_argument("boundary_sample: count >= 1");
    std::vector<Point> pts;
    pts.reserve(count);
    const int n = dom.dim;
    const Eigen::MatrixXd frame = axis_basis(dom);
    auto direction = [&](std::uint64_t i) {
        return Point(frame * halton_direction(i, n));
    };

    auto spheroid_point = [&](const Point& dir) {
        const double a = dom.params[0];
        const double b = dom.params[1];
        const double zeta = dir.dot(dom.axis);
        const double eta = (dir - zeta * dom.axis).norm();
        const double t =
            1.0 / std::sqrt((zeta / a) * (zeta / a) + (eta / b) * (eta / b));
        return Point(dom.center + t * dir);
    };

    switch (dom.kind) {
    case DomainKind::ball: {
        const double R = dom.params[0];
        if (count >= 1) pts.push_back(dom.center + R * dom.axis);
        if (count >= 2) pts.push_back(dom.center - R * dom.axis);
        std::uint64_t i = 0;
        while (static_cast<int>(pts.size()) < count) {
            pts.push_back(dom.center + R * direction(i++));
        }
        break;
    }
    case DomainKind::prolate_spheroid: {
        const double a = dom.params[0];
        if (count >= 1) pts.push_back(dom.center + a * dom.axis);
        if (count >= 2) pts.push_back(dom.center - a * dom.axis);
        std::uint64_t i = 0;
        while (static_cast<int>(pts.size()) < count) {
            pts.push_back(spheroid_point(direction(i++)));
        }
        break;
    }
    case DomainKind::two_ball_union: {
        const double r1 = dom.params[0];
        const double r2 = dom.params[1];
        const Point c1 = dom.center;
        const Point c2 = dom.center + dom.params[2] * dom.axis;
        if (count >= 1) pts.push_back(c1 - r1 * dom.axis); // outer poles
        if (count >= 2) pts.push_back(c2 + r2 * dom.axis);
        std::uint64_t i = 0;
        while (static_cast<int>(pts.size()) < count) {
            const bool first = (i % 2 == 0);
            const Point dir = direction(i / 2);
            ++i;
            const Point p = first ? Point(c1 + r1 * dir) : Point(c2 + r2 * dir);
            // Reject points strictly inside the other ball.
            const double other = first ? (p - c2).norm() - r2
                                       : (p - c1).norm() - r1;
            if (other < 0.0) continue;
            pts.push_back(p);
        }
        break;
    }
    }
    return pts;
}

// --- minimal enclosing ball (Welzl) ----------------------------------------

namespace {

EnclosingBall ball_of_support(const std::vector<const Point*>& support, int n) {
    EnclosingBall b{Point::Zero(n), -1.0};
    const int k = static_cast<int>(support.size());
    if (k == 0) return b;
    if (k == 1) {
        b.center = *support[0];
        b.radius = 0.0;
        return b;
    }
    const Point& q0 = *support[0];
    Eigen::MatrixXd A(k - 1, k - 1);
    Eigen::VectorXd rhs(k - 1);
    std::vector<Point> d(k - 1);
    for (int i = 0; i < k - 1; ++i) d[i] = *support[i + 1] - q0;
    for (int i = 0; i < k - 1; ++i) {
        for (int j = 0; j < k - 1; ++j) A(i, j) = 2.0 * d[i].dot(d[j]);
        rhs(i) = d[i].squaredNorm();
    }
    const Eigen::VectorXd lam = A.completeOrthogonalDecomposition().solve(rhs);
    Point c = q0;
    for (int i = 0; i < k - 1; ++i) c += lam(i) * d[i];
    b.center = c;
    b.radius = (c - q0).norm();
    return b;
}

bool in_ball(const EnclosingBall& b, const Point& p) {
    if (b.radius < 0.0) return false;
    const double r2 = b.radius * b.radius;
    return (p - b.center).squaredNorm() <= r2 + 1e-10 * (1.0 + r2);
}

EnclosingBall welzl(const std::vector<Point>& pts, std::vector<int>& order,
                    int count, std::vector<const Point*>& support, int n) {
    if (count == 0 || static_cast<int>(support.size()) == n + 1) {
        return ball_of_support(support, n);
    }
    const int idx = order[count - 1];
    EnclosingBall b = welzl(pts, order, count - 1, support, n);
    if (in_ball(b, pts[idx])) return b;
    support.push_back(&pts[idx]);
    b = welzl(pts, order, count - 1, support, n);
    support.pop_back();
    return b;
}

} // namespace

EnclosingBall minimal_enclosing_ball(const std::vector<Point>& pts) {
    if (pts.empty()) {
        throw std::invalid_argument("minimal_enclosing_ball: empty point set");
    }
    const int n = static_cast<int>(pts[0].size());
    std::vector<int> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    // Deterministic Fisher-Yates with a fixed LCG.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = pts.size() - 1; i > 0; --i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        std::swap(order[i], order[(state >> 33) % (i + 1)]);
    }
    std::vector<const Point*> support;
    return welzl(pts, order, static_cast<int>(pts.size()), support, n);
}

EnclosingBall enclosing_ball(const ExteriorDomain& dom) {
    int count = 1024;
    EnclosingBall prev = minimal_enclosing_ball(boundary_sample(dom, count));
    for (int iter = 0; iter < 6; ++iter) {
        count *= 2;
        EnclosingBall next = minimal_enclosing_ball(boundary_sample(dom, count));
        if (std::fabs(next.radius - prev.radius) < 1e-8) return next;
        prev = next;
    }
    return prev;
}

double circumradius(const ExteriorDomain& dom) {
    return enclosing_ball(dom).radius;
}

// --- interior sphere radius ------------------------------------------------

namespace {

double tangent_ball_radius(const ExteriorDomain& dom, const Point& p,
                           double cap, double tol) {
    const Point inward = -boundary_normal(dom, p);
    auto contained = [&](double r) {
        return signed_distance(dom, p + r * inward) <= -r + tol;
    };
    if (contained(cap)) return cap;
    double lo = 0.0;
    double hi = cap;
    while (hi - lo > 1e-10 * cap) {
        const double mid = 0.5 * (lo + hi);
        if (contained(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace

double interior_sphere_radius(const ExteriorDomain& dom) {
    const double scale = dom.length_scale();
    const double cap = circumradius(dom);
    const double tol = 1e-12 * scale;
    int count = 2048;
    double prev = -1.0;
    for (int iter = 0; iter < 5; ++iter) {
        double rho = cap;
        for (const Point& p : boundary_sample(dom, count)) {
            rho = std::min(rho, tangent_ball_radius(dom, p, cap, tol));
        }
        if (prev >= 0.0 && std::fabs(rho - prev) < 1e-6 * scale) return rho;
        prev = rho;
        count *= 2;
    }
    return prev;
}

GeometryRadii geometry_radii(const ExteriorDomain& dom) {
    GeometryRadii r{interior_sphere_radius(dom), circumradius(dom)};
    return r;
}

ExteriorDomain scaled(const ExteriorDomain& dom, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    ExteriorDomain d = dom;
    for (double& p : d.params) p *= k;
    return d;
}

} // namespace exmse
