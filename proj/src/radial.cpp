#include "exmse/radial.hpp"

#include "exmse/catenoid.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace exmse {

namespace {

void validate(double R, int n) {
    if (!(R > 0.0)) throw std::invalid_argument("radial: R must be positive");
    if (n < 3) throw std::invalid_argument("radial: dimension must be >= 3");
}

double height_above_R(double lambda, double R, double r, int n) {
    // v_lambda(r) - v_lambda(R) = lambda * int_{R/lambda}^{r/lambda}.
    if (r <= R) return 0.0;
    return lambda * catenoid_profile_integral(R / lambda, r / lambda, n);
}

} // namespace

double RadialProfile::value(double r) const {
    if (r < R) throw std::domain_error("radial: r < R");
    if (s == 0.0) return 0.0;
    const double sign = s > 0.0 ? 1.0 : -1.0;
    return sign * height_above_R(lambda, R, r, n);
}

double RadialProfile::slope(double r) const {
    if (r < R) throw std::domain_error("radial: r < R");
    if (s == 0.0) return 0.0;
    const double sign = s > 0.0 ? 1.0 : -1.0;
    if (r == R) return sign * std::fabs(s);
    CatenoidParams cat(lambda, n);
    return sign * catenoid_slope(cat, r);
}

RadialProfile radial_solution(double R, double s, int n, int sample_count,
                              double r_max_factor) {
    validate(R, n);
    if (sample_count < 2) throw std::invalid_argument("radial: need >= 2 samples");
    if (!(r_max_factor > 1.0))
        throw std::invalid_argument("radial: r_max must exceed R");

    RadialProfile p;
    p.R = R;
    p.s = s;
    p.n = n;
    if (s == 0.0) {
        p.lambda = 0.0;
        p.c = 0.0;
    } else {
        p.lambda = neck_for_slope(R, std::fabs(s), n);
        const double sign = s > 0.0 ? 1.0 : -1.0;
        p.c = sign * limit_height(p.lambda, R, n);
    }

    // Geometric grid in (r - R)/R over [0, r_max_factor - 1], clustered at R.
    const double span = r_max_factor - 1.0;
    const double first = span * 1e-4;
    const double ratio = std::pow(span / first, 1.0 / (sample_count - 2));
    p.samples.reserve(static_cast<std::size_t>(sample_count));
    p.samples.emplace_back(R, 0.0);
    double step = first;
    for (int i = 1; i < sample_count; ++i) {
        const double r = (i + 1 == sample_count) ? R * r_max_factor
                                                 : R * (1.0 + step);
        p.samples.emplace_back(r, p.value(r));
        step *= ratio;
    }
    return p;
}

double radial_tk(double R, double K, double s, int n) {
    validate(R, n);
    if (!(K > R)) throw std::invalid_argument("radial: K must exceed R");
    if (s == 0.0) return 0.0;
    const double lambda = neck_for_slope(R, std::fabs(s), n);
    const double sign = s > 0.0 ? 1.0 : -1.0;
    return sign * height_above_R(lambda, R, K, n);
}

void write_profile_csv(const RadialProfile& profile, std::ostream& out) {
    out << "r,u,slope\n";
    out.precision(17);
    for (const auto& [r, u] : profile.samples) {
        out << r << ',' << u << ',' << profile.slope(r) << '\n';
    }
}

} // namespace exmse
