#pragma once

#include <functional>

namespace exmse {

// Adaptive Gauss-Kronrod (7-15) quadrature on a finite interval.
// Bisects until the embedded error estimate of a panel drops below the
// tolerance share assigned to it. Deterministic: panels are processed
// depth-first in argument order.
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-12,
                                    int max_depth = 48);

} // namespace exmse
