#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mlea/jensen.hpp"
#include "mlea/rng.hpp"

using namespace mlea;

namespace {

// Simultaneous unitary conjugation of (S, G) by a random unitary.
std::pair<HermitianMatrix, HermitianMatrix> conjugate_pair(const HermitianMatrix& S,
                                                           const HermitianMatrix& G, Rng& rng) {
    const int d = S.dim();
    // unitary from the eigenvectors of a random Hermitian matrix
    EigenDecomposition e = eig_hermitian(gaussian_hermitian(d, rng));
    CMatrix U(d, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) U(i, k) = e.vec(k)[i];
    CMatrix Ud = adjoint(U);
    auto conj = [&](const HermitianMatrix& A) {
        return HermitianMatrix::from_cmatrix(mat_mul(mat_mul(U, A.to_cmatrix()), Ud));
    };
    return {conj(S), conj(G)};
}

}  // namespace

TEST_CASE("appendix instance: abs violates the inequality") {
    std::vector<cplx> se = {0.0, 1.0, 1.0, 0.0};
    HermitianMatrix S = HermitianMatrix::from_entries(2, se);
    HermitianMatrix G = HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0});
    const double gap = jensen_gap(SpectralFunction::abs(), S, G, 1.0);
    CHECK(gap == doctest::Approx(2.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(gap < 0.0);

    // jacobi route agrees
    const double jgap = jensen_gap_jacobi(SpectralFunction::abs(), S, G, 1.0);
    CHECK(jgap == doctest::Approx(gap).epsilon(1e-10));
}

TEST_CASE("affine functions give exact equality") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + rng.uniform_int(5);
        HermitianMatrix S = gaussian_hermitian(d, rng);
        HermitianMatrix G = gaussian_hermitian(d, rng);
        G *= (1.0 - rng.uniform()) / op_norm(G);
        const double gap = jensen_gap(SpectralFunction::affine(1.7, -0.4), S, G, 1.0);
        CHECK(std::fabs(gap) <= 1e-10);
    }
}

TEST_CASE("commuting inputs satisfy the inequality for any convex phi") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + rng.uniform_int(5);
        // commuting pair: both are spectral functions of one matrix
        EigenDecomposition e = eig_hermitian(gaussian_hermitian(d, rng));
        std::vector<double> sv(d), gv(d);
        for (int i = 0; i < d; ++i) {
            sv[i] = rng.normal();
            gv[i] = rng.uniform(-1.0, 1.0);
        }
        HermitianMatrix S = spectral_assemble(e, sv);
        HermitianMatrix G = spectral_assemble(e, gv);
        // abs is convex; the commuting case must hold even for it
        CHECK(jensen_gap(SpectralFunction::abs(), S, G, 1.0) >= -1e-10);
        CHECK(jensen_gap(SpectralFunction::monomial(4), S, G, 1.0) >= -1e-9);
    }
}

TEST_CASE("norm precondition is enforced") {
    HermitianMatrix S = HermitianMatrix::identity(2);
    HermitianMatrix G = HermitianMatrix::diagonal(std::vector<double>{2.0, 0.0});
    CHECK_THROWS_AS(jensen_gap(SpectralFunction::abs(), S, G, 1.0), contract_error);
}

TEST_CASE("random suites: certified families hold, abs breaks") {
    // exponential with both signs (Golden-Thompson route)
    for (double c : {0.5, -0.5}) {
        JensenSuiteResult r = random_jensen_suite(SpectralFunction::exp(c), 4, 2000, 11);
        CHECK(r.min_normalized_gap >= -1e-9);
        CHECK(r.confirmed_violations == 0);
    }
    // x^4 (proved case)
    JensenSuiteResult r4 = random_jensen_suite(SpectralFunction::monomial(4), 4, 2000, 12);
    CHECK(r4.min_normalized_gap >= -1e-9);

    // exp_square and erfi potentials (certified by the Laplace route)
    for (long t : {1L, 4L}) {
        JensenSuiteResult rs =
            random_jensen_suite(SpectralFunction::exp_square(t, 1.0, 4), 4, 1500, 13);
        CHECK(rs.min_normalized_gap >= -1e-8);
        JensenSuiteResult re = random_jensen_suite(SpectralFunction::erfi(t, 1.0, 4), 4, 1500, 14);
        CHECK(re.min_normalized_gap >= -1e-8);
    }

    // abs: a violation must surface within 1000 trials
    JensenSuiteResult ra = random_jensen_suite(SpectralFunction::abs(), 4, 1000, 15);
    CHECK(ra.confirmed_violations > 0);
    CHECK(ra.min_normalized_gap < 0.0);
    // the reported argmin is a reproducible witness
    const double regap =
        jensen_gap(SpectralFunction::abs(), ra.argmin.S, ra.argmin.G, ra.argmin.eps);
    CHECK(regap == doctest::Approx(ra.argmin.gap).epsilon(1e-10));
}

TEST_CASE("gap is invariant under simultaneous unitary conjugation") {
    Rng rng(16);
    SpectralFunction phi = SpectralFunction::monomial(4);
    for (int trial = 0; trial < 20; ++trial) {
        HermitianMatrix S = gaussian_hermitian(4, rng);
        HermitianMatrix G = gaussian_hermitian(4, rng);
        G *= (1.0 - rng.uniform()) / op_norm(G);
        const double g1 = jensen_gap(phi, S, G, 1.0);
        auto [S2, G2] = conjugate_pair(S, G, rng);
        const double g2 = jensen_gap(phi, S2, G2, 1.0);
        CHECK(g2 == doctest::Approx(g1).epsilon(1e-8));
    }
}

TEST_CASE("monomial gap scales as c^{2k} under joint rescaling") {
    Rng rng(17);
    for (int k : {1, 2, 3}) {
        SpectralFunction phi = SpectralFunction::monomial(2 * k);
        HermitianMatrix S = gaussian_hermitian(3, rng);
        HermitianMatrix G = gaussian_hermitian(3, rng);
        G *= (1.0 - rng.uniform()) / op_norm(G);
        const double base = jensen_gap(phi, S, G, 1.0);
        for (double c : {0.5, 2.0}) {
            const double scaled = jensen_gap(phi, c * S, c * G, c);
            CHECK(scaled == doctest::Approx(std::pow(c, 2 * k) * base).epsilon(1e-8));
        }
    }
}

TEST_CASE("interleaving product bound") {
    Rng rng(18);
    // GSGS with k = 2, l = 1: gap = tr[S^2] - |tr[GSGS]|
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + rng.uniform_int(4);
        HermitianMatrix S = gaussian_hermitian(d, rng);
        HermitianMatrix G = gaussian_hermitian(d, rng);
        G *= (1.0 - rng.uniform()) / op_norm(G);
        const std::vector<FactorTag> gsgs = {FactorTag::G, FactorTag::S, FactorTag::G,
                                             FactorTag::S};
        CHECK(interleaving_bound_gap(gsgs, S, G) >= -1e-9);

        // all-G sequence: tr[S^0] = d dominates |tr[G^{2k}]|
        const std::vector<FactorTag> allg(4, FactorTag::G);
        const double gap = interleaving_bound_gap(allg, S, G);
        CHECK(gap >= -1e-9);
    }

    // random sequences k <= 4, d <= 5
    for (int trial = 0; trial < 2000; ++trial) {
        const int d = 2 + rng.uniform_int(4);
        const int k = 1 + rng.uniform_int(4);
        const int l = 1 + rng.uniform_int(k);
        std::vector<FactorTag> seq(2 * k, FactorTag::S);
        int placed = 0;
        while (placed < 2 * l) {
            const int pos = rng.uniform_int(2 * k);
            if (seq[pos] == FactorTag::S) {
                seq[pos] = FactorTag::G;
                ++placed;
            }
        }
        HermitianMatrix S = gaussian_hermitian(d, rng);
        HermitianMatrix G = gaussian_hermitian(d, rng);
        G *= (1.0 - rng.uniform()) / op_norm(G);
        double tr_pow = 0.0;
        for (double lam : eigvals_hermitian(S))
            tr_pow += std::pow(lam, static_cast<double>(2 * k - 2 * l));
        const double gap = interleaving_bound_gap(seq, S, G);
        CHECK(gap >= -1e-9 * std::max(1.0, std::fabs(tr_pow)));
    }

    // malformed sequences
    HermitianMatrix S = HermitianMatrix::identity(2);
    HermitianMatrix G = 0.5 * HermitianMatrix::identity(2);
    CHECK_THROWS_AS(interleaving_bound_gap({FactorTag::G}, S, G), contract_error);
    CHECK_THROWS_AS(interleaving_bound_gap({FactorTag::G, FactorTag::S}, S, G), contract_error);
}

TEST_CASE("monomial conjecture search: proved cases and small-k sweep") {
    MonomialSearchReport rep = monomial_conjecture_search(3, 1500, 4, 21);
    REQUIRE(rep.rows.size() == 3);
    // k = 1 and k = 2 are proved; k = 3 matches the reported experiments
    for (const auto& row : rep.rows) {
        CAPTURE(row.k);
        CHECK(row.min_normalized_gap >= -1e-9);
        CHECK(row.flagged == 0);
    }
    CHECK(rep.total_flagged() == 0);
    CHECK_THROWS_AS(monomial_conjecture_search(9, 10, 4, 1), contract_error);
}
