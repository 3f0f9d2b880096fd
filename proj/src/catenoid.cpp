#include "exmse/catenoid.hpp"

#include "exmse/quadrature.hpp"

#include <cmath>
#include <limits>

namespace exmse {

namespace {

constexpr double kSigmaAgreementTol = 1e-10;

// Integrand 1/sqrt(t^{2m} - 1) after the substitution t = 1 + u^2, which
// removes the (t-1)^{-1/2} endpoint singularity:
//   dt = 2u du,  t^{2m} - 1 = expm1(2m log1p(u^2)).
double substituted_integrand(double u, int m) {
    if (u == 0.0) {
        return std::sqrt(2.0 / static_cast<double>(m));
    }
    const double denom = std::expm1(2.0 * m * std::log1p(u * u));
    return 2.0 * u / std::sqrt(denom);
}

// Plain integrand for t away from 1, written through t^{-m} so large t
// cannot overflow.
double smooth_integrand(double t, int m) {
    const double p = std::pow(t, -static_cast<double>(m));
    return p / std::sqrt(1.0 - p * p);
}

// Truncation point beyond which 1/sqrt(t^{2m}-1) equals t^{-m} to machine
// precision, so the tail integral t^{1-m}/(m-1) is exact at double precision.
double tail_cutoff(int m) {
    return std::pow(10.0, 16.0 / (2.0 * m));
}

double tail_integral(double T, int m) {
    return std::pow(T, 1.0 - m) / static_cast<double>(m - 1);
}

} // namespace

double catenoid_profile_integral(double lo, double hi, int n) {
    if (n < 3) throw std::invalid_argument("catenoid integral diverges for n < 3");
    if (!(lo >= 1.0)) throw std::domain_error("catenoid integral: lower limit below the neck");
    if (hi < lo) throw std::domain_error("catenoid integral: reversed limits");
    const int m = n - 1;
    const double split = 2.0;
    const double T = tail_cutoff(m);
    double total = 0.0;

    // Singular part near t = 1 via the u-substitution.
    const double sing_hi = std::min(hi, split);
    if (lo < sing_hi) {
        const double ua = std::sqrt(lo - 1.0);
        const double ub = std::sqrt(sing_hi - 1.0);
        total += integrate_adaptive(
                     [m](double u) { return substituted_integrand(u, m); }, ua,
                     ub, 1e-13)
                     .value;
    }

    // Smooth middle part.
    const double mid_lo = std::max(lo, split);
    const double mid_hi = std::min(hi, T);
    if (mid_lo < mid_hi) {
        total += integrate_adaptive(
                     [m](double t) { return smooth_integrand(t, m); }, mid_lo,
                     mid_hi, 1e-13)
                     .value;
    }

    // Analytic tail.
    if (hi > T) {
        const double start = std::max(lo, T);
        total += tail_integral(start, m);
        if (std::isfinite(hi)) {
            total -= tail_integral(hi, m);
        }
    }
    return total;
}

SigmaValue sigma_quadrature(int n) {
    if (n < 3) throw std::invalid_argument("sigma_n diverges for n < 3");
    const double v = catenoid_profile_integral(
        1.0, std::numeric_limits<double>::infinity(), n);
    return {n, v, SigmaMethod::quadrature};
}

SigmaValue sigma_beta(int n) {
    if (n < 3) throw std::invalid_argument("sigma_n diverges for n < 3");
    const int m = n - 1;
    const double a = static_cast<double>(n - 2) / (2.0 * m);
    const double b = 0.5;
    const double beta =
        std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return {n, beta / (2.0 * m), SigmaMethod::beta_closed_form};
}

SigmaValue sigma(int n) {
    const SigmaValue q = sigma_quadrature(n);
    const SigmaValue c = sigma_beta(n);
    if (std::fabs(q.value - c.value) > kSigmaAgreementTol) {
        throw std::runtime_error(
            "sigma_n: quadrature and Beta closed form disagree beyond 1e-10");
    }
    return c;
}

double catenoid_height(const CatenoidParams& cat, double r) {
    if (r < cat.lambda * (1.0 - 1e-12)) {
        throw std::domain_error("catenoid_height: r below the neck radius");
    }
    const double x = std::max(r / cat.lambda, 1.0);
    return cat.shift + cat.lambda * catenoid_profile_integral(1.0, x, cat.dim);
}

double catenoid_slope(const CatenoidParams& cat, double r) {
    if (r <= cat.lambda) {
        throw std::domain_error("catenoid_slope: infinite at r <= lambda");
    }
    const int m = cat.dim - 1;
    return 1.0 / std::sqrt(std::expm1(2.0 * m * std::log(r / cat.lambda)));
}

double neck_for_slope(double R, double s, int n) {
    if (n < 3) throw std::invalid_argument("neck_for_slope: n must be >= 3");
    if (!(R > 0.0)) throw std::invalid_argument("neck_for_slope: R must be positive");
    if (!(s > 0.0)) throw std::invalid_argument("neck_for_slope: slope must be positive");
    const int m = n - 1;
    return R * std::exp(-std::log1p(1.0 / (s * s)) / (2.0 * m));
}

double limit_height(double lambda, double R, int n) {
    if (!(lambda > 0.0)) throw std::invalid_argument("limit_height: lambda must be positive");
    if (R < lambda * (1.0 - 1e-12)) {
        throw std::domain_error("limit_height: R below the neck radius");
    }
    const double lo = std::max(R / lambda, 1.0);
    return lambda * catenoid_profile_integral(
                        lo, std::numeric_limits<double>::infinity(), n);
}

} // namespace exmse
