#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlea/matrix.hpp"
#include "mlea/rng.hpp"

using namespace mlea;

TEST_CASE("hermitian construction symmetrizes exactly") {
    std::vector<cplx> e = {cplx(1.0, 0.0), cplx(2.0, 1.0), cplx(2.0, -1.0), cplx(3.0, 0.0)};
    // tiny asymmetry within tolerance
    e[1] += cplx(1e-13, 0.0);
    HermitianMatrix h = HermitianMatrix::from_entries(2, e);
    CHECK(h.at(0, 1) == std::conj(h.at(1, 0)));
    CHECK(h.at(0, 0).imag() == 0.0);

    // asymmetry beyond 1e-12 is rejected
    e[1] += cplx(1e-11, 0.0);
    CHECK_THROWS_AS(HermitianMatrix::from_entries(2, e), contract_error);
}

TEST_CASE("dimension constraints") {
    CHECK_THROWS_AS(HermitianMatrix::zero(0), dimension_error);
    HermitianMatrix a = HermitianMatrix::identity(2);
    HermitianMatrix b = HermitianMatrix::identity(3);
    CHECK_THROWS_AS(inner(a, b), dimension_error);
}

TEST_CASE("inner product identities") {
    Rng rng(7);
    const int d = 5;
    HermitianMatrix A = gaussian_hermitian(d, rng);

    // inner(I, X) equals trace(X)
    CHECK(inner(HermitianMatrix::identity(d), A) == doctest::Approx(A.trace()).epsilon(1e-12));

    // inner(A, A) = |A|_F^2
    CHECK(inner(A, A) ==
          doctest::Approx(A.frobenius_norm() * A.frobenius_norm()).epsilon(1e-12));

    // Pauli-X vs Pauli-Z are orthogonal
    std::vector<cplx> px = {0.0, 1.0, 1.0, 0.0};
    std::vector<cplx> pz = {1.0, 0.0, 0.0, -1.0};
    CHECK(inner(HermitianMatrix::from_entries(2, px), HermitianMatrix::from_entries(2, pz)) ==
          doctest::Approx(0.0));
}

TEST_CASE("arithmetic and quadratic form") {
    Rng rng(3);
    HermitianMatrix A = gaussian_hermitian(4, rng);
    HermitianMatrix B = gaussian_hermitian(4, rng);
    HermitianMatrix S = A + B;
    CHECK(S.at(1, 2) == A.at(1, 2) + B.at(1, 2));
    HermitianMatrix D = S - B;
    CHECK(std::abs(D.at(2, 3) - A.at(2, 3)) < 1e-15);

    std::vector<cplx> v = {cplx(0.5, 0.0), cplx(0.0, 0.5), cplx(0.5, 0.0), cplx(0.0, 0.5)};
    const double qf = quadratic_form(A, v);
    // compare against inner(A, vv^dag)
    std::vector<cplx> proj(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) proj[i * 4 + j] = v[i] * std::conj(v[j]);
    CHECK(qf == doctest::Approx(inner(A, HermitianMatrix::from_entries(4, proj))).epsilon(1e-12));
}

TEST_CASE("rng split streams differ and reproduce") {
    Rng a(42), b(42);
    CHECK(a.next_u64() == b.next_u64());
    Rng c(42);
    Rng s0 = c.split(0), s1 = c.split(1);
    CHECK(s0.next_u64() != s1.next_u64());
    Rng s0_again = Rng(42).split(0);
    CHECK(s0_again.next_u64() != 0);  // defined value, just touch it
}
