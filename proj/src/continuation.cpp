#include "exmse/continuation.hpp"

#include "exmse/catenoid.hpp"
#include "exmse/radial.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace exmse {

namespace {

double default_h(const ExteriorDomain& dom) {
    return dom.kind == DomainKind::ball ? 1.0 / 512 : 1.0 / 8;
}

// Mirror symmetry about the truncation-sphere center plane.
bool mirror_for(const ExteriorDomain& dom) {
    return dom.kind != DomainKind::two_ball_union ||
           dom.params[0] == dom.params[1];
}

std::vector<double> radii_schedule(const ExteriorDomain& dom,
                                   const ContinuationOptions& opt) {
    const double varrho = circumradius(dom);
    std::vector<double> radii = opt.radii;
    if (radii.empty()) radii = {4.0 * varrho, 8.0 * varrho, 16.0 * varrho};
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > varrho))
            throw std::invalid_argument(
                "continuation: truncation radius inside the circumradius");
        if (k > 0 && !(radii[k] > radii[k - 1]))
            throw std::invalid_argument(
                "continuation: radii schedule must be strictly increasing");
    }
    return radii;
}

// Monotone piecewise-cubic (Fritsch-Carlson) interpolation; preserves the
// strict monotonicity of the sampled map.
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  double q) {
    const std::size_t m = x.size();
    if (m == 1) return y[0];
    std::vector<double> dx(m - 1), sl(m - 1), d(m);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        dx[i] = x[i + 1] - x[i];
        sl[i] = (y[i + 1] - y[i]) / dx[i];
    }
    d[0] = sl[0];
    d[m - 1] = sl[m - 2];
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (sl[i - 1] * sl[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * dx[i] + dx[i - 1];
            const double w2 = dx[i] + 2.0 * dx[i - 1];
            d[i] = (w1 + w2) / (w1 / sl[i - 1] + w2 / sl[i]);
        }
    }
    std::size_t i = 0;
    if (q <= x.front()) {
        i = 0;
    } else if (q >= x.back()) {
        i = m - 2;
    } else {
        i = static_cast<std::size_t>(
                std::upper_bound(x.begin(), x.end(), q) - x.begin()) - 1;
    }
    const double t = (q - x[i]) / dx[i];
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y[i] + h10 * dx[i] * d[i] + h01 * y[i + 1] +
           h11 * dx[i] * d[i + 1];
}

} // namespace

GridPtr continuation_grid(const ExteriorDomain& domain, double R_out,
                          const ContinuationOptions& opt) {
    const double h = opt.h > 0.0 ? opt.h : default_h(domain);
    if (domain.kind == DomainKind::ball)
        return make_radial_grid(domain.params[0], R_out, h, domain.dim);
    return make_axisymmetric_grid(domain, R_out, h, mirror_for(domain));
}

OuterValueResult maximal_outer_value(const ExteriorDomain& domain, double R_out,
                                     double s, const ContinuationOptions& opt,
                                     OuterContext* ctx) {
    if (!std::isfinite(s))
        throw std::invalid_argument("continuation: slope must be finite");
    OuterContext local;
    if (!ctx) ctx = &local;
    if (!ctx->grid) {
        ctx->grid = continuation_grid(domain, R_out, opt);
        ctx->workspace = make_solver_workspace();
        ctx->has_last = false;
    }

    OuterValueResult res;
    const double target = std::fabs(s);
    const double sign = s < 0.0 ? -1.0 : 1.0;

    if (target == 0.0) {
        res.field = newton_solve(ctx->grid, 0.0, nullptr, ctx->workspace.get());
        res.t_k = 0.0;
        res.solves = 1;
        ctx->last = res.field;
        ctx->has_last = true;
        ctx->last_t = 0.0;
        return res;
    }

    std::vector<std::pair<double, double>> evals; // (t magnitude, gradient)
    auto eval = [&](double tmag) {
        const DiscreteField* warm = ctx->has_last ? &ctx->last : nullptr;
        DiscreteField f =
            newton_solve(ctx->grid, sign * tmag, warm, ctx->workspace.get());
        if (!f.converged) {
            std::ostringstream msg;
            msg << "continuation: solve did not converge at t=" << sign * tmag;
            throw std::runtime_error(msg.str());
        }
        const double bg = boundary_gradient_max(f);
        ctx->last = std::move(f);
        ctx->has_last = true;
        ctx->last_t = sign * tmag;
        ++res.solves;
        evals.emplace_back(tmag, bg);
        return bg - target;
    };

    const double varrho = circumradius(domain);
    const double bound = sigma(domain.dim).value * varrho + 1.0;

    // Seed near the previous accepted value (s-continuation) or the exact
    // ball answer at the same outer radius.
    double t = ctx->has_last && std::fabs(ctx->last_t) > 0.0
                   ? std::fabs(ctx->last_t)
                   : radial_tk(domain.kind == DomainKind::ball
                                   ? domain.params[0]
                                   : varrho,
                               R_out, target, domain.dim);
    t = std::clamp(t, 1e-4, 0.999 * bound);

    // Bracket the root locally around the seed: with warm continuation the
    // seed is already close, so probing outward beats bisecting from zero.
    double lo = 0.0, glo = -target, hi = 0.0, ghi = 0.0;
    double g = eval(t);
    if (g > 0.0) {
        hi = t;
        ghi = g;
        double step = std::max(64.0 * opt.t_tol, 0.05 * t);
        for (double cand = t - step; cand > 0.0; cand -= step) {
            const double gc = eval(cand);
            if (gc <= 0.0) {
                lo = cand;
                glo = gc;
                break;
            }
            hi = cand;
            ghi = gc;
            step *= 4.0;
        }
    } else {
        lo = t;
        glo = g;
        double step = std::max(64.0 * opt.t_tol, 0.05 * std::max(t, 0.1));
        for (;;) {
            const double cand = std::min(bound, lo + step);
            const double gc = eval(cand);
            if (gc > 0.0) {
                hi = cand;
                ghi = gc;
                break;
            }
            lo = cand;
            glo = gc;
            if (cand >= bound)
                throw std::runtime_error(
                    "continuation: slope not attained below the catenoid "
                    "bound");
            step *= 4.0;
        }
    }

    // Illinois variant of regula falsi: bracketed, superlinear.
    int side = 0;
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 80 && hi - lo > opt.t_tol; ++it) {
        double tm = (glo * hi - ghi * lo) / (glo - ghi);
        if (!(tm > lo && tm < hi)) tm = 0.5 * (lo + hi);
        const double gm = eval(tm);
        if (std::fabs(gm) < 1e-12 * (1.0 + target)) {
            lo = hi = tm;
            break;
        }
        if (gm > 0.0) {
            hi = tm;
            ghi = gm;
            if (side == 1) glo *= 0.5;
            side = 1;
        } else {
            lo = tm;
            glo = gm;
            if (side == -1) ghi *= 0.5;
            side = -1;
        }
    }
    root = 0.5 * (lo + hi);
    eval(root); // leaves ctx->last at the accepted value
    res.t_k = sign * root;
    res.field = ctx->last;

    std::sort(evals.begin(), evals.end());
    double span = 0.0;
    for (const auto& e : evals) span = std::max(span, e.second);
    for (std::size_t k = 1; k < evals.size(); ++k) {
        if (evals[k].second < evals[k - 1].second - 1e-9 * (1.0 + span))
            res.monotone = false;
    }
    return res;
}

DecayFit asymptotic_constant(const std::vector<DiscreteField>& fields) {
    if (fields.size() < 2)
        throw std::invalid_argument(
            "continuation: decay fit needs at least two truncation radii");
    std::vector<std::pair<double, double>> pts; // (R_out, outer height)
    for (const auto& f : fields) {
        if (!f.grid)
            throw std::invalid_argument("continuation: field has no grid");
        pts.emplace_back(f.grid->R_out, f.outer_value);
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (!(pts[k].first > pts[k - 1].first))
            throw std::invalid_argument(
                "continuation: decay fit radii must be distinct");

    const int n = fields.front().grid->n;
    const double p0 = 2.0 - n;
    DecayFit fit;
    fit.exponent = p0;

    // Least squares on the basis {1, R^{2-n}}; exact with two radii.
    double s11 = 0, s1b = 0, sbb = 0, s1u = 0, sbu = 0;
    for (const auto& [R, u] : pts) {
        const double b = std::pow(R, p0);
        s11 += 1.0;
        s1b += b;
        sbb += b * b;
        s1u += u;
        sbu += b * u;
    }
    const double det = s11 * sbb - s1b * s1b;
    fit.c = (s1u * sbb - sbu * s1b) / det;
    fit.a = (s11 * sbu - s1b * s1u) / det;
    double rss = 0.0;
    for (const auto& [R, u] : pts) {
        const double e = u - (fit.c + fit.a * std::pow(R, p0));
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(pts.size()));

    if (pts.size() >= 3) {
        // Free-exponent diagnostic from three spread radii: the difference
        // ratio determines the exponent independently of c and a.
        const auto [R1, u1] = pts.front();
        const auto [R2, u2] = pts[pts.size() / 2];
        const auto [R3, u3] = pts.back();
        const double d12 = u1 - u2, d23 = u2 - u3;
        if (std::fabs(d23) > 1e-14 * (1.0 + std::fabs(u1))) {
            const double ratio = d12 / d23;
            auto shape = [&](double p) {
                return (std::pow(R1, p) - std::pow(R2, p)) /
                       (std::pow(R2, p) - std::pow(R3, p));
            };
            double plo = p0 - 3.0, phi = -0.01;
            double flo = shape(plo) - ratio, fhi = shape(phi) - ratio;
            if (flo * fhi < 0.0) {
                for (int it = 0; it < 200; ++it) {
                    const double pm = 0.5 * (plo + phi);
                    const double fm = shape(pm) - ratio;
                    if (flo * fm <= 0.0) {
                        phi = pm;
                    } else {
                        plo = pm;
                        flo = fm;
                    }
                }
                fit.exponent = 0.5 * (plo + phi);
            }
        }
    }
    return fit;
}

FoliationFamily solve_family(const ExteriorDomain& domain,
                             const std::vector<double>& s_grid,
                             const ContinuationOptions& opt) {
    if (s_grid.empty())
        throw std::invalid_argument("continuation: empty slope grid");
    for (std::size_t k = 1; k < s_grid.size(); ++k)
        if (!(s_grid[k] > s_grid[k - 1]))
            throw std::invalid_argument(
                "continuation: slope grid must be strictly increasing");

    FoliationFamily fam;
    fam.domain = domain;
    fam.radii = radii_schedule(domain, opt);
    fam.leaves.resize(s_grid.size());

    // Shallow-to-steep processing: warm starts chain in |s|, and a reflected
    // grid replays the identical arithmetic with signs flipped.
    std::vector<std::size_t> order(s_grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::fabs(s_grid[a]), fb = std::fabs(s_grid[b]);
        return fa != fb ? fa < fb : s_grid[a] < s_grid[b];
    });

    std::vector<OuterContext> ctx(fam.radii.size());
    for (std::size_t k = 0; k < fam.radii.size(); ++k) {
        ctx[k].grid = continuation_grid(domain, fam.radii[k], opt);
        ctx[k].workspace = make_solver_workspace();
    }
    fam.h = ctx.back().grid->h;

    for (std::size_t idx : order) {
        Leaf& leaf = fam.leaves[idx];
        leaf.s = s_grid[idx];
        try {
            std::vector<DiscreteField> fields;
            for (std::size_t k = 0; k < fam.radii.size(); ++k) {
                OuterValueResult res = maximal_outer_value(
                    domain, fam.radii[k], leaf.s, opt, &ctx[k]);
                leaf.t.push_back(res.t_k);
                leaf.solves += res.solves;
                leaf.monotone = leaf.monotone && res.monotone;
                fields.push_back(std::move(res.field));
            }
            leaf.fit = asymptotic_constant(fields);
            leaf.field = std::move(fields.back());
            leaf.ok = true;
        } catch (const std::runtime_error&) {
            leaf.ok = false;
        }
    }
    return fam;
}

double height_to_slope(const ExteriorDomain& domain, double c,
                       const ContinuationOptions& opt,
                       const FoliationFamily* hint) {
    const int n = domain.dim;
    const double sig = sigma(n).value;
    const double rho = interior_sphere_radius(domain);
    if (!(c >= 0.0) || !(c < sig * rho))
        throw std::invalid_argument(
            "continuation: target height outside [0, sigma_n rho)");
    if (c == 0.0) return 0.0;

    const std::vector<double> radii = radii_schedule(domain, opt);
    std::vector<OuterContext> ctx(radii.size());
    int evals = 0;
    auto c_of = [&](double s) {
        std::vector<DiscreteField> fields;
        for (std::size_t k = 0; k < radii.size(); ++k) {
            OuterValueResult res =
                maximal_outer_value(domain, radii[k], s, opt, &ctx[k]);
            fields.push_back(std::move(res.field));
        }
        ++evals;
        return asymptotic_constant(fields).c;
    };

    // Initial guess: interpolate the family's monotone c(s) samples, or
    // invert the exact map for the inscribed rho-ball (a lower bound on the
    // domain's c(s), so its s is an upper bracket).
    const double s_cap = std::tan(89.9 * M_PI / 180.0);
    double s1 = 0.0;
    if (hint && hint->leaves.size() >= 2) {
        std::vector<double> cs, ss;
        for (const auto& leaf : hint->leaves) {
            if (!leaf.ok || leaf.s < 0.0) continue;
            if (!cs.empty() && !(leaf.fit.c > cs.back())) continue;
            cs.push_back(leaf.fit.c);
            ss.push_back(leaf.s);
        }
        if (cs.size() >= 2) s1 = pchip_eval(cs, ss, c);
    }
    if (!(s1 > 0.0)) {
        double lo = 0.0, hi = s_cap;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double cm =
                limit_height(neck_for_slope(rho, mid, n), rho, n);
            (cm < c ? lo : hi) = mid;
        }
        s1 = 0.5 * (lo + hi);
    }
    s1 = std::clamp(s1, 1e-6, s_cap);

    double lo = 0.0, glo = -c;
    double s = s1, g = c_of(s) - c;
    while (g <= 0.0) {
        lo = s;
        glo = g;
        if (s >= s_cap)
            throw std::runtime_error(
                "continuation: target height not reached below the slope cap");
        s = std::min(s_cap, 1.7 * s + 0.05);
        g = c_of(s) - c;
    }
    double hi = s, ghi = g;
    if (std::fabs(ghi) < 5e-5) return hi;
    if (lo > 0.0 && std::fabs(glo) < 5e-5) return lo;

    int side = 0;
    for (int it = 0; it < 60; ++it) {
        double sm = (glo * hi - ghi * lo) / (glo - ghi);
        if (!(sm > lo && sm < hi)) sm = 0.5 * (lo + hi);
        const double gm = c_of(sm) - c;
        if (std::fabs(gm) < 5e-5) return sm;
        if (gm > 0.0) {
            hi = sm;
            ghi = gm;
            if (side == 1) glo *= 0.5;
            side = 1;
        } else {
            lo = sm;
            glo = gm;
            if (side == -1) ghi *= 0.5;
            side = -1;
        }
        if (hi - lo < 1e-12) break;
    }
    // Bracket collapsed without meeting the height tolerance.
    throw std::runtime_error("continuation: height targeting did not converge");
}

double BarrierSubsolution::radial(double r) const {
    if (r <= a) return 0.0;
    const double v = catenoid_height(CatenoidParams(a, n), r);
    return std::max(0.0, v - drop);
}

double BarrierSubsolution::operator()(const Point& x) const {
    if (x.size() != center.size())
        throw std::invalid_argument("barrier: point dimension mismatch");
    return radial((x - center).norm());
}

BarrierSubsolution barrier_subsolution(const ExteriorDomain& domain, double c,
                                       double a) {
    if (!(c >= 0.0))
        throw std::invalid_argument("barrier: target height must be >= 0");
    const EnclosingBall eb = enclosing_ball(domain);
    if (!(a >= eb.radius * (1.0 - 1e-12)))
        throw std::invalid_argument(
            "barrier: ball of radius a does not contain the obstacle");
    const double sig = sigma(domain.dim).value;
    if (!(sig * a > c))
        throw std::invalid_argument("barrier: a too small for target height");

    BarrierSubsolution f;
    f.center = eb.center;
    f.a = a;
    f.n = domain.dim;
    f.c = c;
    f.drop = sig * a - c;
    return f;
}

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::ball: return "ball";
    case DomainKind::prolate_spheroid: return "prolate_spheroid";
    case DomainKind::two_ball_union: return "two_ball_union";
    }
    return "unknown";
}

ExteriorDomain domain_from_json(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    const std::vector<double> p = j.at("params").get<std::vector<double>>();
    if (kind == "ball") return ExteriorDomain::make_ball(n, p.at(0));
    if (kind == "prolate_spheroid")
        return ExteriorDomain::make_prolate_spheroid(n, p.at(0), p.at(1));
    if (kind == "two_ball_union")
        return ExteriorDomain::make_two_ball_union(n, p.at(0), p.at(1), p.at(2));
    throw std::runtime_error("family: unknown domain kind '" + kind + "'");
}

} // namespace

void write_family_json(const FoliationFamily& family, std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["domain"] = {{"kind", kind_name(family.domain.kind)},
                   {"n", family.domain.dim},
                   {"params", family.domain.params}};
    j["h"] = family.h;
    j["radii"] = family.radii;
    ordered_json leaves = ordered_json::array();
    for (const auto& leaf : family.leaves) {
        ordered_json L;
        L["s"] = leaf.s;
        L["gamma"] = std::atan(leaf.s);
        L["t"] = leaf.t;
        L["c"] = leaf.fit.c;
        L["a"] = leaf.fit.a;
        L["exponent"] = leaf.fit.exponent;
        L["fit_residual"] = leaf.fit.residual;
        L["newton_iterations"] = leaf.field.newton_iterations;
        L["solves"] = leaf.solves;
        L["monotone"] = leaf.monotone;
        L["ok"] = leaf.ok;
        L["values"] = std::vector<double>(
            leaf.field.values.data(),
            leaf.field.values.data() + leaf.field.values.size());
        leaves.push_back(std::move(L));
    }
    j["leaves"] = std::move(leaves);
    out << j.dump(2) << '\n';
}

FoliationFamily read_family_json(std::istream& in) {
    ordered_json j;
    in >> j;
    if (j.at("schema_version").get<int>() != 1)
        throw std::runtime_error("family: unsupported schema version");

    FoliationFamily fam;
    fam.domain = domain_from_json(j.at("domain"));
    fam.h = j.at("h").get<double>();
    fam.radii = j.at("radii").get<std::vector<double>>();
    if (fam.radii.empty()) throw std::runtime_error("family: empty radii");

    ContinuationOptions opt;
    opt.h = fam.h;
    GridPtr grid = continuation_grid(fam.domain, fam.radii.back(), opt);

    for (const auto& L : j.at("leaves")) {
        Leaf leaf;
        leaf.s = L.at("s").get<double>();
        leaf.t = L.at("t").get<std::vector<double>>();
        leaf.fit.c = L.at("c").get<double>();
        leaf.fit.a = L.at("a").get<double>();
        leaf.fit.exponent = L.at("exponent").get<double>();
        leaf.fit.residual = L.at("fit_residual").get<double>();
        leaf.solves = L.at("solves").get<int>();
        leaf.monotone = L.at("monotone").get<bool>();
        leaf.ok = L.at("ok").get<bool>();
        const std::vector<double> vals =
            L.at("values").get<std::vector<double>>();
        if (static_cast<int>(vals.size()) != grid->num_unknowns())
            throw std::runtime_error("family: node count mismatch");
        leaf.field.grid = grid;
        leaf.field.outer_value = leaf.t.empty() ? 0.0 : leaf.t.back();
        leaf.field.values =
            Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
        leaf.field.newton_iterations = L.at("newton_iterations").get<int>();
        leaf.field.converged = leaf.ok;
        fam.leaves.push_back(std::move(leaf));
    }
    return fam;
}

} // namespace exmse
