#include "doctest.h"

#include "exmse/quadrature.hpp"

#include <cmath>

using exmse::integrate_adaptive;

TEST_CASE("polynomials are integrated exactly by a single panel") {
    auto r = integrate_adaptive([](double x) { return x * x * x - 2.0 * x; },
                                -1.0, 3.0);
    CHECK(r.value == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(r.panels == 1);
}

TEST_CASE("oscillatory integrand subdivides and converges") {
    auto r = integrate_adaptive([](double x) { return std::sin(50.0 * x); },
                                0.0, 1.0, 1e-13);
    const double exact = (1.0 - std::cos(50.0)) / 50.0;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(r.panels > 1);
}

TEST_CASE("integrable algebraic endpoint behavior") {
    // sqrt(x) on [0,1]; mildly singular derivative at 0.
    auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0,
                                1.0, 1e-13);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("degenerate and invalid intervals") {
    auto r = integrate_adaptive([](double x) { return x; }, 2.0, 2.0);
    CHECK(r.value == 0.0);
    CHECK_THROWS(integrate_adaptive([](double x) { return x; }, 1.0, 0.0));
}
