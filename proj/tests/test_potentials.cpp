#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlea/potentials.hpp"
#include "mlea/rng.hpp"
#include "mlea/special.hpp"

using namespace mlea;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

// Double-integral definition of the erfi potential, evaluated by nested
// quadrature: Phi(s) = (eps sqrt t / d) [2 int_0^{s/sqrt(2 eps^2 t)} F(u) du - 1].
double erfi_double_integral(double s, long t, double eps, int d) {
    const double v = s / (eps * std::sqrt(2.0 * t));
    const double outer = simpson([](double u) { return erfi_integral(u); }, 0.0, v, 20000);
    return eps * std::sqrt(static_cast<double>(t)) / d * (2.0 * outer - 1.0);
}

}  // namespace

TEST_CASE("exp-square and erfi values at s = 0") {
    const double eps = 2.0;
    const int d = 4;
    for (long t : {1L, 3L, 16L}) {
        PotentialSpec es = PotentialSpec::exp_square(eps, d);
        CHECK(potential_eval(es, 0.0, t) == doctest::Approx(eps / (d * std::sqrt(double(t)))));
        PotentialSpec er = PotentialSpec::erfi(eps, d);
        CHECK(potential_eval(er, 0.0, t) ==
              doctest::Approx(-eps * std::sqrt(double(t)) / d).epsilon(1e-14));
    }
}

TEST_CASE("erfi closed form equals its double-integral definition") {
    const double eps = 2.0;
    const int d = 3;
    PotentialSpec er = PotentialSpec::erfi(eps, d);
    for (double s : {0.4, 1.3, -2.2, 5.0}) {
        for (long t : {1L, 4L}) {
            const double closed = potential_eval(er, s, t);
            const double direct = erfi_double_integral(s, t, eps, d);
            CHECK(closed == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("erfi second derivative is exp-square / eps^2") {
    const double eps = 2.0;
    const int d = 5;
    PotentialSpec er = PotentialSpec::erfi(eps, d);
    PotentialSpec es = PotentialSpec::exp_square(eps, d);
    Rng rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const long t = 1 + rng.uniform_int(16);
        const double s = rng.uniform(-4.0 * eps, 4.0 * eps);
        const double h = 1e-4;
        const double fd = (potential_eval(er, s + h, t) - 2.0 * potential_eval(er, s, t) +
                           potential_eval(er, s - h, t)) /
                          (h * h);
        const double expect = potential_eval(es, s, t) / (eps * eps);
        CHECK(std::fabs(fd - expect) <= 1e-5 * std::fabs(expect));
    }
}

TEST_CASE("recursion margins for exp-square and erfi") {
    const double eps = 2.0;
    const int d = 4;
    const std::vector<double> grid = linspace(-10.0 * eps, 10.0 * eps, 1001);
    for (long t : {1L, 2L, 7L, 33L, 64L}) {
        CHECK(check_recursion(PotentialSpec::exp_square(eps, d), t, grid) >= -1e-10);
        CHECK(check_recursion(PotentialSpec::erfi(eps, d), t, grid) >= -1e-10);
    }
}

TEST_CASE("time-independent exponential potential fails the recursion") {
    const double eps = 2.0;
    const double eta = 0.7;
    PotentialSpec ex = PotentialSpec::exponential(eps, 4, eta);
    const std::vector<double> origin = {0.0};
    const double margin = check_recursion(ex, 5, origin);
    CHECK(margin == doctest::Approx(1.0 - std::cosh(eta * eps)).epsilon(1e-14));
    CHECK(margin < 0.0);
}

TEST_CASE("laplace transform quadrature reproduces exp-square") {
    const double eps = 2.0;
    const int d = 4;
    PotentialSpec es = PotentialSpec::exp_square(eps, d);

    // Gaussian integral normalization at s = 0
    for (long t : {1L, 4L, 9L}) {
        CHECK(laplace_quadrature_expsq(es, 0.0, t) ==
              doctest::Approx(eps / (d * std::sqrt(double(t)))).epsilon(1e-10));
    }
    // closed form at s = eps, t = 4
    CHECK(laplace_quadrature_expsq(es, eps, 4) ==
          doctest::Approx(potential_eval(es, eps, 4)).epsilon(1e-8));
    // even in s
    CHECK(laplace_quadrature_expsq(es, 1.7, 3) ==
          doctest::Approx(laplace_quadrature_expsq(es, -1.7, 3)).epsilon(1e-12));
}

TEST_CASE("gaussian ensemble decomposition reproduces exp-square") {
    const double eps = 2.0;
    const int d = 4;
    PotentialSpec es = PotentialSpec::exp_square(eps, d);
    CHECK(gaussian_ensemble_decomposition(es, 0.0, 1) ==
          doctest::Approx(eps / (d * 1.0)).epsilon(1e-10));
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const long t = 1 + rng.uniform_int(16);
        const double s = rng.uniform(-4.0, 4.0) * eps * std::sqrt(double(t));
        CHECK(gaussian_ensemble_decomposition(es, s, t) ==
              doctest::Approx(potential_eval(es, s, t)).epsilon(1e-8));
    }
    // doubling the z-truncation changes nothing beyond the Gaussian tail
    const double base = gaussian_ensemble_decomposition(es, 1.5, 2);
    const double pref = std::sqrt(2.0 / M_PI) * eps / (4 * std::sqrt(2.0));
    const double wide = simpson(
        [&](double z) { return pref * std::exp(-0.5 * z * z) * std::cosh(z * 1.5 / (eps * std::sqrt(2.0))); },
        0.0, 24.0, 8000);
    CHECK(std::fabs(base - wide) <= 1e-12 * std::max(1.0, std::fabs(base)));
}

TEST_CASE("closed-form regret bounds") {
    const double l = 1.5;
    // erfi_main at S_rel = 0
    CHECK(regret_bound(RegretBoundKind::ErfiMain, 1024, l, 16, 0.0) ==
          doctest::Approx(l * 32.0 * (6.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-14));
    // expsq at T = 1, S_rel = 0 collapses to 2 sqrt(e) l
    CHECK(regret_bound(RegretBoundKind::ExpSq, 1, l, 16, 0.0) ==
          doctest::Approx(2.0 * std::sqrt(std::exp(1.0)) * l).epsilon(1e-14));
    // monotone in S_rel
    double prev = -1.0;
    for (double S : {0.0, 0.5, 1.0, 2.0}) {
        for (RegretBoundKind k : {RegretBoundKind::ErfiMain, RegretBoundKind::ExpSq,
                                  RegretBoundKind::MmwuOracle}) {
            const double b = regret_bound(k, 256, l, 16, S);
            CHECK(b >= 0.0);
        }
        const double b = regret_bound(RegretBoundKind::ErfiMain, 256, l, 16, S);
        CHECK(b > prev);
        prev = b;
    }
    CHECK_THROWS_AS(regret_bound(RegretBoundKind::ErfiMain, 0, l, 16, 0.0), contract_error);
    CHECK_THROWS_AS(regret_bound(RegretBoundKind::ErfiMain, 16, l, 16, 99.0), contract_error);
}

TEST_CASE("convexity: second differences stay nonnegative") {
    const double eps = 2.0;
    const int d = 4;
    const double h = 1e-3;
    std::vector<PotentialSpec> fams = {
        PotentialSpec::exp_square(eps, d), PotentialSpec::erfi(eps, d),
        PotentialSpec::cosh_pot(eps, d, 1.3), PotentialSpec::exponential(eps, d, 0.4)};
    for (const PotentialSpec& p : fams) {
        for (long t : {1L, 4L}) {
            for (double s : linspace(-6.0 * eps, 6.0 * eps, 301)) {
                const double dd = potential_eval(p, s + h, t) - 2.0 * potential_eval(p, s, t) +
                                  potential_eval(p, s - h, t);
                CHECK(dd >= -1e-9);
            }
        }
    }
}

TEST_CASE("evenness of exp-square, cosh and erfi") {
    const double eps = 2.0;
    const int d = 4;
    for (double s : linspace(0.1, 8.0, 40)) {
        for (long t : {1L, 5L}) {
            CHECK(potential_eval(PotentialSpec::exp_square(eps, d), s, t) ==
                  doctest::Approx(potential_eval(PotentialSpec::exp_square(eps, d), -s, t)));
            CHECK(potential_eval(PotentialSpec::cosh_pot(eps, d, 0.8), s, t) ==
                  doctest::Approx(potential_eval(PotentialSpec::cosh_pot(eps, d, 0.8), -s, t)));
            const double plus = potential_eval(PotentialSpec::erfi(eps, d), s, t);
            const double minus = potential_eval(PotentialSpec::erfi(eps, d), -s, t);
            CHECK(std::fabs(plus - minus) <= 1e-10 * std::max(1.0, std::fabs(plus)));
        }
    }
}

TEST_CASE("range errors carry the offending arguments") {
    PotentialSpec es = PotentialSpec::exp_square(1.0, 4);
    CHECK_THROWS_AS(potential_eval(es, 60.0, 1), range_error);
    PotentialSpec er = PotentialSpec::erfi(1.0, 4);
    CHECK_THROWS_AS(potential_eval(er, 60.0, 1), range_error);
    CHECK_THROWS_AS(potential_eval(es, 1.0, 0), contract_error);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(PotentialSpec::exp_square(0.0, 4), contract_error);
    CHECK_THROWS_AS(PotentialSpec::exp_square(1.0, 0), contract_error);
    CHECK_THROWS_AS(PotentialSpec::cosh_pot(1.0, 4, -0.5), contract_error);
    CHECK_THROWS_AS(PotentialSpec::exponential(1.0, 4, 0.0), contract_error);
}
