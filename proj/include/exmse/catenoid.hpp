#pragma once

#include <stdexcept>
#include <vector>

namespace exmse {

// Fundamental solutions of the minimal surface equation on the exterior of
// a ball: generalized half-catenoids v_lambda, and the dimensional constant
// sigma_n = integral_1^inf dt / sqrt(t^{2(n-1)} - 1), n >= 3.

struct CatenoidParams {
    double lambda;                 // neck radius, > 0
    std::vector<double> center;    // center p of the neck sphere
    int dim;                       // ambient dimension n >= 3
    double shift = 0.0;            // vertical shift added to v_lambda

    CatenoidParams(double lambda_, int dim_, double shift_ = 0.0)
        : lambda(lambda_), dim(dim_), shift(shift_) {
        if (!(lambda > 0.0)) throw std::invalid_argument("catenoid: lambda must be positive");
        if (dim < 3) throw std::invalid_argument("catenoid: dimension must be >= 3");
    }
};

enum class SigmaMethod { quadrature, beta_closed_form };

struct SigmaValue {
    int n;
    double value;
    SigmaMethod method;
};

// sigma_n by adaptive quadrature with the endpoint substitution t = 1 + u^2.
SigmaValue sigma_quadrature(int n);

// sigma_n = B((n-2)/(2(n-1)), 1/2) / (2(n-1)) via the Gamma function.
SigmaValue sigma_beta(int n);

// Dual-route sigma_n: both methods must agree to 1e-10, else throws.
SigmaValue sigma(int n);

// v_lambda(r) + shift for r >= lambda. Strictly increasing in r.
double catenoid_height(const CatenoidParams& cat, double r);

// |dv_lambda/dr| = ((r/lambda)^{2(n-1)} - 1)^{-1/2}, r > lambda.
double catenoid_slope(const CatenoidParams& cat, double r);

// Neck radius of the catenoid whose slope at radius R equals s:
// lambda = R (1 + s^{-2})^{-1/(2(n-1))}.
double neck_for_slope(double R, double s, int n);

// Height gained between radius R and infinity by the lambda-neck catenoid:
// lambda * integral_{R/lambda}^inf dt / sqrt(t^{2(n-1)} - 1).
double limit_height(double lambda, double R, int n);

// Bare integral of dt / sqrt(t^{2(n-1)} - 1) over [lo, hi], hi may be +inf.
// Exposed for the radial module; lo >= 1.
double catenoid_profile_integral(double lo, double hi, int n);

} // namespace exmse
