#pragma once

#include "exmse/continuation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace exmse {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    double margin = 0.0; // positive distance to the threshold when passing
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool pass = false;
    double eps_h = 0.0;
};

// Height tolerance at the family's resolution: measured node error of the
// unit-ball benchmark on the same grid mode and spacing, plus the exact gap
// left by truncating the s -> infinity limit at the family's steepest leaf.
double calibrate_epsilon(const FoliationFamily& family);

// Node-wise strict ordering of adjacent leaves (minimum gap reported).
CheckResult check_foliation(const FoliationFamily& family);

// sigma_n rho - eps <= |c_max| <= sigma_n varrho + eps, with near-equality
// (within 2 eps) flagged: equality on either side certifies a ball.
CheckResult check_bounds(const FoliationFamily& family,
                         const GeometryRadii& radii, double eps_h);

// Interior gradient max below the boundary one, and boundary gradient at |s|.
CheckResult check_gradient_principles(const Leaf& leaf, double h);

// Fitted height-decay exponent near 2 - n and a flat outer end.
CheckResult check_decay(const Leaf& leaf);

// Fresh solves at +t and -t on the steepest leaf's grid must negate exactly.
CheckResult check_symmetry(const FoliationFamily& family);

// Subsolution below, vanishing-at-varrho catenoid above, node-wise.
CheckResult check_barriers(const Leaf& leaf, const ExteriorDomain& domain,
                           double eps_h);

// All checks on a computed family; per-leaf checks report their worst case.
VerificationReport verify_family(const FoliationFamily& family);

void write_report_json(const VerificationReport& report, std::ostream& out);

} // namespace exmse
