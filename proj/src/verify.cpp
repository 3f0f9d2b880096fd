#include "exmse/verify.hpp"

#include "exmse/catenoid.hpp"
#include "exmse/radial.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace exmse {

namespace {

// Distance of a node from the center of the outer truncation sphere.
double node_radius(const Grid& g, int k) {
    if (g.mode == GridMode::radial_1d) return g.R_inner + (k + 1) * g.h;
    const GridNode& nd = g.nodes[static_cast<std::size_t>(k)];
    return std::hypot(nd.y, nd.z - g.z_out);
}

const Leaf* steepest_ok_leaf(const FoliationFamily& family) {
    const Leaf* best = nullptr;
    for (const auto& leaf : family.leaves) {
        if (!leaf.ok) continue;
        if (!best || std::fabs(leaf.s) > std::fabs(best->s)) best = &leaf;
    }
    return best;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

double calibrate_epsilon(const FoliationFamily& family) {
    const int n = family.domain.dim;
    const bool radial_mode =
        family.domain.kind == DomainKind::ball;

    // Unit-ball benchmark, s = 1, truncated at 8: solve on the family's
    // grid spacing and take the max node error against the exact profile.
    const RadialProfile exact = radial_solution(1.0, 1.0, n);
    const double t = radial_tk(1.0, 8.0, 1.0, n);
    GridPtr grid;
    if (radial_mode) {
        grid = make_radial_grid(1.0, 8.0, family.h, n);
    } else {
        grid = make_axisymmetric_grid(ExteriorDomain::make_ball(n, 1.0), 8.0,
                                      family.h, true);
    }
    DiscreteField f = newton_solve(grid, t);
    double disc = 0.0;
    for (int k = 0; k < grid->num_unknowns(); ++k) {
        const double r = node_radius(*grid, k);
        disc = std::max(disc, std::fabs(f.values[k] - exact.value(r)));
    }

    // Truncating s at the steepest leaf leaves the inscribed-ball limit
    // sigma_n rho short by an exactly computable amount.
    double s_max = 0.0;
    for (const auto& leaf : family.leaves)
        s_max = std::max(s_max, std::fabs(leaf.s));
    const double rho = interior_sphere_radius(family.domain);
    double gap = sigma(n).value * rho;
    if (s_max > 0.0)
        gap -= limit_height(neck_for_slope(rho, s_max, n), rho, n);
    return disc + gap;
}

CheckResult check_foliation(const FoliationFamily& family) {
    CheckResult res;
    res.name = "foliation";
    res.threshold = 0.0;
    std::vector<const Leaf*> leaves;
    for (const auto& leaf : family.leaves)
        if (leaf.ok) leaves.push_back(&leaf);
    if (leaves.size() < 2) {
        res.pass = true;
        res.note = "insufficient leaves (vacuous)";
        return res;
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < leaves.size(); ++k) {
        const Leaf& lo = *leaves[k - 1];
        const Leaf& hi = *leaves[k];
        if (lo.field.grid != hi.field.grid)
            throw std::invalid_argument("verify: leaves on mismatched grids");
        min_gap =
            std::min(min_gap, (hi.field.values - lo.field.values).minCoeff());
    }
    res.measured = min_gap;
    res.pass = min_gap > 0.0;
    res.margin = min_gap;
    res.note = "min node-wise gap between adjacent leaves";
    return res;
}

CheckResult check_bounds(const FoliationFamily& family,
                         const GeometryRadii& radii, double eps_h) {
    CheckResult res;
    res.name = "bounds";
    res.threshold = eps_h;
    const Leaf* leaf = steepest_ok_leaf(family);
    if (!leaf) {
        res.note = "no solved leaf";
        return res;
    }
    const double sig = sigma(family.domain.dim).value;
    const double c_max = std::fabs(leaf->fit.c);
    const double lo = sig * radii.rho, hi = sig * radii.varrho;
    res.measured = c_max;
    res.pass = c_max >= lo - eps_h && c_max <= hi + eps_h;
    res.margin = std::min(c_max - (lo - eps_h), (hi + eps_h) - c_max);
    const bool near_lo = std::fabs(c_max - lo) < 2.0 * eps_h;
    const bool near_hi = std::fabs(c_max - hi) < 2.0 * eps_h;
    res.note = "sigma*rho=" + fmt(lo) + " sigma*varrho=" + fmt(hi) +
               " near-equality:" +
               (near_lo && near_hi ? "both"
                                   : (near_lo ? "lower"
                                              : (near_hi ? "upper" : "none")));
    return res;
}

CheckResult check_gradient_principles(const Leaf& leaf, double h) {
    CheckResult res;
    res.name = "gradient";
    const double tol = std::max(0.05, 4.0 * h);
    res.threshold = tol;
    const double bg = boundary_gradient_max(leaf.field);
    const double ig = interior_gradient_max(leaf.field);
    const double excess = ig - bg;
    const double slope_err = std::fabs(bg - std::fabs(leaf.s));
    const double slope_tol = tol * (1.0 + std::fabs(leaf.s));
    res.measured = excess;
    res.pass = excess <= tol && slope_err <= slope_tol;
    res.margin = std::min(tol - excess, slope_tol - slope_err);
    res.note = "boundary=" + fmt(bg) + " interior=" + fmt(ig) +
               " slope_err=" + fmt(slope_err);
    return res;
}

CheckResult check_decay(const Leaf& leaf) {
    CheckResult res;
    res.name = "decay";
    const int n = leaf.field.grid ? leaf.field.grid->n : 3;
    const double p0 = 2.0 - n;
    const double window = 0.10 * std::fabs(p0);
    res.threshold = window;
    const double dev = std::fabs(leaf.fit.exponent - p0);
    const double og =
        leaf.field.grid
            ? outer_gradient_max(leaf.field, 3.0 * leaf.field.grid->h)
            : 0.0;
    res.measured = dev;
    res.pass = dev <= window && og < 0.05;
    res.margin = std::min(window - dev, 0.05 - og);
    res.note = "exponent=" + fmt(leaf.fit.exponent) +
               " outer_gradient=" + fmt(og);
    return res;
}

CheckResult check_symmetry(const FoliationFamily& family) {
    CheckResult res;
    res.name = "symmetry";
    res.threshold = 1e-12;
    const Leaf* leaf = steepest_ok_leaf(family);
    if (!leaf || leaf->t.empty() || leaf->t.back() == 0.0) {
        res.pass = true;
        res.note = "zero family (self-negation)";
        return res;
    }
    const double t = leaf->t.back();
    // Identical cold computations with the sign flipped: IEEE arithmetic
    // commutes with negation through the whole solve, so any discrepancy
    // indicates a sign-asymmetric code path.
    DiscreteField up = newton_solve(leaf->field.grid, t);
    DiscreteField un = newton_solve(leaf->field.grid, -t);
    const double dev = (up.values + un.values).lpNorm<Eigen::Infinity>();
    const double drift =
        (up.values - leaf->field.values).lpNorm<Eigen::Infinity>();
    res.measured = dev;
    res.pass = up.converged && un.converged && dev <= 1e-12 && drift <= 1e-6;
    res.margin = res.threshold - dev;
    res.note = "t=" + fmt(t) + " warm/cold drift=" + fmt(drift);
    return res;
}

CheckResult check_barriers(const Leaf& leaf, const ExteriorDomain& domain,
                           double eps_h) {
    CheckResult res;
    res.name = "barriers";
    const Grid& g = *leaf.field.grid;
    const double tol = std::max(eps_h, 5.0 * g.h * g.h);
    res.threshold = tol;

    const double sgn = leaf.s < 0.0 ? -1.0 : 1.0;
    const double c = std::max(0.0, sgn * leaf.fit.c);
    const double varrho = circumradius(domain);
    const double sig = sigma(domain.dim).value;
    const double a = std::max(varrho, 1.02 * c / sig);
    const BarrierSubsolution f = barrier_subsolution(domain, c, a);
    const CatenoidParams upper(varrho, domain.dim);

    // Sliding a vertical translate of v_varrho down onto the leaf, first
    // contact can only happen over the circumsphere (v_varrho is vertical
    // there), so the admissible shift is the leaf's own maximum on it. For
    // a ball that sphere is the obstacle boundary and the shift is O(h s).
    const double band = varrho + 2.0 * g.h;
    double shift = 0.0;
    for (int k = 0; k < g.num_unknowns(); ++k)
        if (node_radius(g, k) <= band)
            shift = std::max(shift, sgn * leaf.field.values[k]);

    // The gradient maximum principle caps |grad u| at |s|; with zero
    // boundary data that pins u under the cone |s| * dist(x, obstacle).
    const double s_abs = std::fabs(leaf.s);
    double viol = 0.0;
    for (int k = 0; k < g.num_unknowns(); ++k) {
        const double r = node_radius(g, k);
        const double u = sgn * leaf.field.values[k];
        viol = std::max(viol, f.radial(r) - u);
        const double ub =
            r > band ? catenoid_height(upper, r) + shift : shift;
        viol = std::max(viol, u - ub);
        double dist;
        if (g.mode == GridMode::radial_1d) {
            dist = r - g.R_inner;
        } else {
            const GridNode& nd = g.nodes[static_cast<std::size_t>(k)];
            dist = meridian_signed_distance(domain, nd.y, nd.z);
        }
        viol = std::max(viol, u - s_abs * dist);
    }
    res.measured = viol;
    res.pass = viol <= tol;
    res.margin = tol - viol;
    res.note = "max one-sided violation against f and v_varrho";
    return res;
}

VerificationReport verify_family(const FoliationFamily& family) {
    VerificationReport report;
    report.eps_h = calibrate_epsilon(family);
    report.checks.push_back(check_foliation(family));
    report.checks.push_back(check_bounds(
        family, geometry_radii(family.domain), report.eps_h));
    report.checks.push_back(check_symmetry(family));

    // Per-leaf checks: keep the worst margin of each kind.
    auto keep_worst = [&](CheckResult cand, double s) {
        cand.note += " [worst leaf s=" + fmt(s) + "]";
        for (auto& existing : report.checks) {
            if (existing.name != cand.name) continue;
            if (cand.margin < existing.margin) existing = cand;
            return;
        }
        report.checks.push_back(std::move(cand));
    };
    int failed_leaves = 0;
    for (const auto& leaf : family.leaves) {
        if (!leaf.ok) {
            ++failed_leaves;
            continue;
        }
        keep_worst(check_gradient_principles(leaf, family.h), leaf.s);
        keep_worst(check_decay(leaf), leaf.s);
        keep_worst(check_barriers(leaf, family.domain, report.eps_h), leaf.s);
    }
    if (failed_leaves > 0) {
        CheckResult solver;
        solver.name = "solver";
        solver.pass = false;
        solver.measured = failed_leaves;
        solver.note = "leaves without a converged solve";
        report.checks.push_back(solver);
    }

    report.pass = true;
    for (const auto& c : report.checks) report.pass = report.pass && c.pass;
    return report;
}

void write_report_json(const VerificationReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["eps_h"] = report.eps_h;
    j["pass"] = report.pass;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"measured", c.measured},
                          {"threshold", c.threshold},
                          {"margin", c.margin},
                          {"note", c.note}});
    }
    j["checks"] = std::move(checks);
    out << j.dump(2) << '\n';
}

} // namespace exmse
