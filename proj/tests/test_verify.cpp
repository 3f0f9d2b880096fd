#include "doctest.h"

#include "exmse/catenoid.hpp"
#include "exmse/continuation.hpp"
#include "exmse/verify.hpp"

#include <cmath>
#include <sstream>

using namespace exmse;

namespace {

// One shared ball family keeps the suite fast; tests copy and perturb it.
const FoliationFamily& ball_family() {
    static const FoliationFamily fam = [] {
        ContinuationOptions opt;
        opt.radii = {4.0, 8.0};
        opt.h = 1.0 / 256;
        const double t20 = std::tan(20.0 * M_PI / 180.0);
        const double t70 = std::tan(70.0 * M_PI / 180.0);
        return solve_family(ExteriorDomain::make_ball(3, 1.0),
                            {t20, 1.0, t70}, opt);
    }();
    return fam;
}

const CheckResult& find_check(const VerificationReport& report,
                              const std::string& name) {
    for (const auto& c : report.checks)
        if (c.name == name) return c;
    throw std::runtime_error("missing check " + name);
}

} // namespace

TEST_CASE("computed ball family passes every check") {
    const VerificationReport report = verify_family(ball_family());
    CHECK(report.pass);
    CHECK(report.eps_h > 0.0);
    CHECK(std::isfinite(report.eps_h));
    for (const auto& c : report.checks) {
        INFO(c.name, ": ", c.note);
        CHECK(c.pass);
    }
    // A ball has rho = varrho, so the limit height must brush both bounds.
    CHECK(find_check(report, "bounds").note.find("near-equality:both") !=
          std::string::npos);
}

TEST_CASE("epsilon calibration grows when the slope grid is truncated") {
    const double full = calibrate_epsilon(ball_family());
    FoliationFamily shallow = ball_family();
    shallow.leaves.resize(2); // drop the steepest leaf
    CHECK(calibrate_epsilon(shallow) > full);
}

TEST_CASE("foliation check rejects touching or crossing leaves") {
    const FoliationFamily& fam = ball_family();
    CHECK(check_foliation(fam).pass);

    FoliationFamily dup = fam;
    dup.leaves = {fam.leaves[0], fam.leaves[0]};
    CHECK_FALSE(check_foliation(dup).pass);

    FoliationFamily crossed = fam;
    std::swap(crossed.leaves[0], crossed.leaves[1]);
    const CheckResult res = check_foliation(crossed);
    CHECK_FALSE(res.pass);
    CHECK(res.measured < 0.0);
}

TEST_CASE("single-leaf family passes foliation vacuously") {
    FoliationFamily one = ball_family();
    one.leaves.resize(1);
    const CheckResult res = check_foliation(one);
    CHECK(res.pass);
    CHECK(res.note.find("vacuous") != std::string::npos);
}

TEST_CASE("bounds check fails outside the inclusion band") {
    const GeometryRadii radii = geometry_radii(ball_family().domain);
    CHECK(check_bounds(ball_family(), radii, 0.3).pass);

    FoliationFamily high = ball_family();
    high.leaves.back().fit.c = sigma(3).value * radii.varrho + 1.0;
    CHECK_FALSE(check_bounds(high, radii, 0.3).pass);

    // A ball family truncated at tan 70 deg undershoots sigma * rho by more
    // than 0.2, so an honest small tolerance must fail too.
    CHECK_FALSE(check_bounds(ball_family(), radii, 0.01).pass);
}

TEST_CASE("gradient check catches an interior spike") {
    const FoliationFamily& fam = ball_family();
    const Leaf& good = fam.leaves.back();
    CHECK(check_gradient_principles(good, fam.h).pass);

    Leaf bad = good;
    bad.field.values[bad.field.values.size() / 2] += 0.5;
    CHECK_FALSE(check_gradient_principles(bad, fam.h).pass);
}

TEST_CASE("decay check rejects the wrong exponent") {
    const Leaf& good = ball_family().leaves.back();
    CHECK(check_decay(good).pass);

    Leaf bad = good;
    bad.fit.exponent = -2.0; // r^{-2} is not the n = 3 far field
    CHECK_FALSE(check_decay(bad).pass);
}

TEST_CASE("symmetry check is exact and catches drifted values") {
    const FoliationFamily& fam = ball_family();
    const CheckResult res = check_symmetry(fam);
    CHECK(res.pass);
    CHECK(res.measured == 0.0);

    FoliationFamily drifted = fam;
    drifted.leaves.back().field.values.array() += 1e-3;
    CHECK_FALSE(check_symmetry(drifted).pass);
}

TEST_CASE("barrier check sandwiches leaves and flags a lifted one") {
    const FoliationFamily& fam = ball_family();
    const double eps = calibrate_epsilon(fam);
    for (const Leaf& leaf : fam.leaves)
        CHECK(check_barriers(leaf, fam.domain, eps).pass);

    Leaf lifted = fam.leaves.back();
    lifted.field.values.array() += 1.0;
    CHECK_FALSE(check_barriers(lifted, fam.domain, eps).pass);
}

TEST_CASE("report flags families with unsolved leaves") {
    FoliationFamily broken = ball_family();
    broken.leaves[1].ok = false;
    const VerificationReport report = verify_family(broken);
    CHECK_FALSE(report.pass);
    CHECK_FALSE(find_check(report, "solver").pass);
}

TEST_CASE("report serialization is deterministic and complete") {
    const VerificationReport report = verify_family(ball_family());
    std::ostringstream a, b;
    write_report_json(report, a);
    write_report_json(report, b);
    CHECK(a.str() == b.str());
    for (const char* key :
         {"schema_version", "eps_h", "pass", "checks", "measured",
          "threshold", "margin", "note"})
        CHECK(a.str().find(key) != std::string::npos);
}

TEST_CASE("halving h does not flip the verdict") {
    ContinuationOptions opt;
    opt.radii = {4.0, 8.0};
    opt.h = 1.0 / 128;
    const double t20 = std::tan(20.0 * M_PI / 180.0);
    const double t70 = std::tan(70.0 * M_PI / 180.0);
    auto coarse = solve_family(ExteriorDomain::make_ball(3, 1.0),
                               {t20, 1.0, t70}, opt);
    CHECK(verify_family(coarse).pass);
    CHECK(verify_family(ball_family()).pass);
}
