#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mlea/special.hpp"

using namespace mlea;

namespace {

// Quadrature oracle for F(x) = int_0^x exp(u^2) du.
double erfi_integral_oracle(double x, long panels) {
    return simpson([](double u) { return std::exp(u * u); }, 0.0, x, panels);
}

}  // namespace

TEST_CASE("F(0) = 0 and oddness") {
    CHECK(erfi_integral(0.0) == 0.0);
    for (double x : {0.1, 0.7, 1.3, 3.0, 6.2, 9.0, 20.0}) {
        CHECK(erfi_integral(-x) == doctest::Approx(-erfi_integral(x)).epsilon(1e-14));
    }
}

TEST_CASE("F(1) against the 1e6-panel quadrature oracle") {
    const double oracle = erfi_integral_oracle(1.0, 1000000);
    CHECK(std::fabs(erfi_integral(1.0) - oracle) <= 1e-10 * std::fabs(oracle));
    // frozen value computed from the oracle above
    CHECK(erfi_integral(1.0) == doctest::Approx(1.4626517459071816).epsilon(1e-13));
}

TEST_CASE("dawson across all three regimes") {
    // relative accuracy target 1e-12; oracle panels scaled to the range
    for (double x : {0.05, 0.3, 0.49, 0.51, 1.0, 2.5, 4.0, 5.9, 6.9, 7.1, 9.0, 14.0}) {
        const double oracle = erfi_integral_oracle(x, 400000) * std::exp(-x * x);
        CHECK(std::fabs(dawson(x) - oracle) <= 1e-12 * std::max(std::fabs(oracle), 1e-3));
    }
    // classical reference point
    CHECK(dawson(1.0) == doctest::Approx(0.5380795069127684).epsilon(1e-13));
    CHECK(dawson(-1.0) == doctest::Approx(-0.5380795069127684).epsilon(1e-13));
}

TEST_CASE("domain bound") {
    CHECK(std::isfinite(erfi_integral(26.0)));
    CHECK_THROWS_AS(erfi_integral(26.5), range_error);
    CHECK_THROWS_AS(erfi_integral(-27.0), range_error);
}

TEST_CASE("simpson basics") {
    // exact for cubics
    const double v = simpson([](double x) { return x * x * x - 2.0 * x; }, -1.0, 2.0, 2);
    CHECK(v == doctest::Approx(15.0 / 4.0 - 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(simpson([](double) { return 0.0; }, 0.0, 1.0, 3), contract_error);
}
