#include "exmse/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace exmse {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double kronrod;
    double error;
};

PanelEstimate evaluate_panel(const std::function<double(double)>& f,
                             double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - half * kKronrodNodes[i]);
        fv[14 - i] = f(c + half * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
    }
    kron += kKronrodWeights[7] * fv[7];
    // Gauss-7 uses the odd Kronrod nodes (indices 1, 3, 5 from each side).
    gauss += kGaussWeights[0] * (fv[1] + fv[13]);
    gauss += kGaussWeights[1] * (fv[3] + fv[11]);
    gauss += kGaussWeights[2] * (fv[5] + fv[9]);
    gauss += kGaussWeights[3] * fv[7];
    kron *= half;
    gauss *= half;
    const double diff = std::fabs(kron - gauss);
    // Standard QUADPACK-style sharpened error estimate.
    const double err = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    return {kron, std::min(diff, err)};
}

void integrate_recursive(const std::function<double(double)>& f,
                         double a, double b, double tol, int depth,
                         int max_depth, QuadratureResult& acc) {
    const PanelEstimate est = evaluate_panel(f, a, b);
    if (est.error <= tol || depth >= max_depth) {
        acc.value += est.kronrod;
        acc.error_estimate += est.error;
        ++acc.panels;
        return;
    }
    const double c = 0.5 * (a + b);
    integrate_recursive(f, a, c, 0.5 * tol, depth + 1, max_depth, acc);
    integrate_recursive(f, c, b, 0.5 * tol, depth + 1, max_depth, acc);
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
    if (!(a <= b)) {
        throw std::invalid_argument("integrate_adaptive: reversed interval");
    }
    QuadratureResult acc;
    if (a == b) {
        return acc;
    }
    integrate_recursive(f, a, b, abs_tol, 0, max_depth, acc);
    return acc;
}

} // namespace exmse
