#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mlea/quantum.hpp"
#include "mlea/rng.hpp"
#include "mlea/tensor.hpp"

using namespace mlea;

namespace {

double max_entry_diff(const HermitianMatrix& A, const HermitianMatrix& B) {
    double m = 0.0;
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) m = std::max(m, std::abs(A.at(i, j) - B.at(i, j)));
    return m;
}

DensityMatrix random_density(int d, Rng& rng) {
    CMatrix g(d, d);
    for (cplx& v : g.a) v = cplx(rng.normal(), rng.normal());
    CMatrix p = mat_mul(g, adjoint(g));
    HermitianMatrix h = HermitianMatrix::from_cmatrix(p);
    h *= 1.0 / h.trace();
    return DensityMatrix::checked(h);
}

// Independent cumulant-from-moments recursion:
// kappa_n = mu_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j mu_{n-j}.
std::vector<double> cumulants_by_recursion(const std::vector<double>& mu) {
    const int kmax = static_cast<int>(mu.size()) - 1;
    std::vector<double> kappa(kmax + 1, 0.0);
    auto choose = [](int n, int k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        return c;
    };
    for (int n = 1; n <= kmax; ++n) {
        double s = mu[n];
        for (int j = 1; j < n; ++j) s -= choose(n - 1, j - 1) * kappa[j] * mu[n - j];
        kappa[n] = s;
    }
    return std::vector<double>(kappa.begin() + 1, kappa.end());
}

}  // namespace

TEST_CASE("pauli strings realize the expected matrices") {
    PauliString y;
    y.letters = {PauliLetter::Y};
    HermitianMatrix Y = y.to_matrix();
    CHECK(Y.at(0, 1) == cplx(0.0, -1.0));
    CHECK(Y.at(1, 0) == cplx(0.0, 1.0));

    PauliString zx;
    zx.letters = {PauliLetter::Z, PauliLetter::X};
    HermitianMatrix ZX = zx.to_matrix();
    std::vector<cplx> xe = {0.0, 1.0, 1.0, 0.0};
    HermitianMatrix X = HermitianMatrix::from_entries(2, xe);
    HermitianMatrix Z = HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0});
    CHECK(max_entry_diff(ZX, kron(Z, X)) < 1e-15);

    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        PauliString p = PauliString::uniform(3, rng);
        HermitianMatrix M = p.to_matrix();
        CHECK(op_norm(M) == doctest::Approx(1.0).epsilon(1e-12));
        const double tr = M.trace();
        if (p.is_identity())
            CHECK(tr == doctest::Approx(8.0));
        else
            CHECK(tr == doctest::Approx(0.0));
    }
}

TEST_CASE("global depolarization") {
    Rng rng(6);
    DensityMatrix rho = random_density(4, rng);
    CHECK(max_entry_diff(depolarize_global(rho, 0.0).matrix(), rho.matrix()) == 0.0);
    CHECK(max_entry_diff(depolarize_global(rho, 1.0).matrix(),
                         DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
    CHECK_THROWS_AS(depolarize_global(rho, 1.5), contract_error);

    for (int trial = 0; trial < 10; ++trial) {
        DensityMatrix r = random_density(4, rng);
        for (double gamma : {0.2, 0.5, 0.8}) {
            CHECK(relative_entropy_vs_mixed(depolarize_global(r, gamma)) <=
                  (1.0 - gamma) * relative_entropy_vs_mixed(r) + 1e-9);
        }
    }
}

TEST_CASE("local depolarization") {
    Rng rng(7);
    DensityMatrix a = random_density(2, rng);
    DensityMatrix b = random_density(2, rng);
    DensityMatrix joint = DensityMatrix::from_psd_unit_trace(kron(a.matrix(), b.matrix()));
    DensityMatrix dep = depolarize_local(joint, 0, 0.37);
    HermitianMatrix a_dep = depolarize_global(a, 0.37).matrix();
    CHECK(max_entry_diff(dep.matrix(), kron(a_dep, b.matrix())) < 1e-12);

    DensityMatrix all = joint;
    for (int q = 0; q < 2; ++q) all = depolarize_local(all, q, 1.0);
    CHECK(max_entry_diff(all.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-12);

    for (int trial = 0; trial < 10; ++trial) {
        DensityMatrix r = random_density(8, rng);
        DensityMatrix d1 = depolarize_local(r, 1 + trial % 2, 0.4);
        CHECK(d1.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eigvals_hermitian(d1.matrix()).front() >= -1e-12);
    }
    CHECK_THROWS_AS(depolarize_local(random_density(6, rng), 0, 0.5), dimension_error);
    CHECK_THROWS_AS(depolarize_local(random_density(4, rng), 2, 0.5), dimension_error);
}

TEST_CASE("noisy circuit states") {
    DensityMatrix pure = noisy_circuit_state(3, 2, 0.0, 42);
    const std::vector<double> ev = eigvals_hermitian(pure.matrix());
    CHECK(ev.back() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(ev[ev.size() - 2]) < 1e-10);

    DensityMatrix flat = noisy_circuit_state(3, 1, 1.0, 43);
    CHECK(max_entry_diff(flat.matrix(), DensityMatrix::maximally_mixed(8).matrix()) < 1e-12);

    const int n = 4;
    for (double gamma : {0.1, 0.3}) {
        for (int depth : {1, 2}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                DensityMatrix rho = noisy_circuit_state(n, depth, gamma, seed);
                const double bound =
                    std::pow(1.0 - gamma, 2.0 * depth) * n * std::log(2.0) + 1e-6;
                CHECK(relative_entropy_vs_mixed(rho) <= bound);
            }
        }
    }
}

TEST_CASE("haar subsystem states") {
    DensityMatrix pure = haar_subsystem_state(8, 8, 3);
    CHECK(eigvals_hermitian(pure.matrix()).back() == doctest::Approx(1.0).epsilon(1e-10));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DensityMatrix rho = haar_subsystem_state(4, 64, seed);
        CHECK(rho.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eigvals_hermitian(rho.matrix()).front() >= -1e-12);
    }

    // Page scaling probe: mean S_rel within 3x of d/d_prime
    const int d = 2, dp = 256;
    double mean = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s)
        mean += relative_entropy_vs_mixed(haar_subsystem_state(d, dp, 1000 + s));
    mean /= seeds;
    const double page = static_cast<double>(d) / dp;
    CHECK(mean >= page / 3.0);
    CHECK(mean <= page * 3.0);

    CHECK_THROWS_AS(haar_subsystem_state(3, 8, 1), dimension_error);
}

TEST_CASE("random product states and pauli second moments") {
    auto m0 = pauli_second_moment(BlochEnsemble::point({0, 0, 0}), 100, 1);
    for (const auto& row : m0)
        for (double v : row) CHECK(v == 0.0);

    auto mz = pauli_second_moment(BlochEnsemble::point({0, 0, 1}), 100, 2);
    CHECK(mz[2][2] == doctest::Approx(1.0));
    CHECK(mz[0][0] == doctest::Approx(0.0));
    CHECK(mz[1][1] == doctest::Approx(0.0));

    auto ms = pauli_second_moment(BlochEnsemble::uniform_sphere(), 10000, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = i == j ? 1.0 / 3.0 : 0.0;
            CHECK(std::fabs(ms[i][j] - expect) < 0.02);
        }
    CHECK(moment_matrix_op_norm(ms) <= 1.0 + 1e-9);

    DensityMatrix rho = random_product_state(3, BlochEnsemble::uniform_sphere(), 7);
    CHECK(rho.dim() == 8);
    CHECK(rho.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eigvals_hermitian(rho.matrix()).front() >= -1e-12);
    const CMatrix sq = mat_mul(rho.matrix().to_cmatrix(), rho.matrix().to_cmatrix());
    CHECK(trace(sq).real() == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(BlochEnsemble::point({1.2, 0, 0}), contract_error);
}

TEST_CASE("gibbs states") {
    Rng rng(11);
    HermitianMatrix H = gaussian_hermitian(5, rng);
    CHECK(max_entry_diff(gibbs_state(H, 0.0).matrix(),
                         DensityMatrix::maximally_mixed(5).matrix()) < 1e-12);
    const double E = 1.7, beta = 0.8;
    DensityMatrix g = gibbs_state(HermitianMatrix::diagonal(std::vector<double>{0.0, E}), beta);
    const double z = 1.0 + std::exp(-beta * E);
    CHECK(g.matrix().at(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-12));
    CHECK(g.matrix().at(1, 1).real() == doctest::Approx(std::exp(-beta * E) / z).epsilon(1e-12));
    DensityMatrix gh = gibbs_state(H, 0.6);
    CMatrix a = mat_mul(H.to_cmatrix(), gh.matrix().to_cmatrix());
    CMatrix b = mat_mul(gh.matrix().to_cmatrix(), H.to_cmatrix());
    double comm = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) comm = std::max(comm, std::abs(a.a[i] - b.a[i]));
    CHECK(comm < 1e-12);
    CHECK_THROWS_AS(gibbs_state(H, -0.1), contract_error);
}

TEST_CASE("hamiltonian ensembles") {
    int inside = 0;
    double mean_tr = 0.0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        HamiltonianSample h = sample_gue(32, 100 + s);
        if (op_norm(h.H) <= 3.0) ++inside;
        mean_tr += h.H.trace() / 32.0;
    }
    CHECK(inside >= static_cast<int>(0.95 * seeds));
    CHECK(std::fabs(mean_tr / seeds) < 0.1);

    const int n = 5;
    inside = 0;
    for (int s = 0; s < seeds; ++s) {
        HamiltonianSample h = sample_rsps(n, n * n * n, 200 + s);
        if (op_norm(h.H) <= 3.0) ++inside;
    }
    CHECK(inside >= static_cast<int>(0.95 * seeds));

    HamiltonianSample h1 = sample_gue(16, 7), h2 = sample_gue(16, 7);
    CHECK(h1.H.data() == h2.H.data());
}

TEST_CASE("spectral cumulants") {
    HermitianMatrix C = 2.5 * HermitianMatrix::identity(6);
    std::vector<double> k = hamiltonian_cumulants(C, 6);
    CHECK(k[0] == doctest::Approx(2.5));
    for (int i = 1; i < 6; ++i) CHECK(std::fabs(k[i]) < 1e-9);

    HermitianMatrix H = sample_gue(24, 99).H;
    std::vector<double> ev = eigvals_hermitian(H);
    double mu1 = 0.0, mu2 = 0.0;
    for (double v : ev) {
        mu1 += v / 24.0;
        mu2 += v * v / 24.0;
    }
    std::vector<double> kk = hamiltonian_cumulants(H, 8);
    CHECK(kk[1] == doctest::Approx(mu2 - mu1 * mu1).epsilon(1e-12));

    std::vector<double> mu(9, 0.0);
    mu[0] = 1.0;
    for (int p = 1; p <= 8; ++p) {
        for (double v : ev) mu[p] += std::pow(v, p);
        mu[p] /= 24.0;
    }
    std::vector<double> oracle = cumulants_by_recursion(mu);
    for (int i = 0; i < 8; ++i)
        CHECK(kk[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
}

TEST_CASE("gibbs relative entropy matches the cumulant series") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        HamiltonianSample h = sample_gue(32, seed);
        REQUIRE(op_norm(h.H) <= 3.0);
        std::vector<double> kappa = hamiltonian_cumulants(h.H, 8);
        for (double beta : {0.05, 0.1, 0.2}) {
            const double exact = relative_entropy_vs_mixed(gibbs_state(h.H, beta));
            double series = 0.0;
            double fact = 1.0;
            for (int k = 2; k <= 8; ++k) {
                fact *= k;
                series += std::pow(-beta, k) / fact * (k - 1) * kappa[k - 1];
            }
            CHECK(std::fabs(exact - series) < 1e-4);
        }
    }
}

TEST_CASE("losses and gradients") {
    Rng rng(17);
    const int d = 6;
    DensityMatrix rho = random_density(d, rng);
    DensityMatrix truth = random_density(d, rng);

    LossEval at_truth = loss_and_grad(LossKind::L1, HermitianMatrix::identity(d), truth, &truth);
    CHECK(at_truth.loss == doctest::Approx(0.0));
    CHECK(at_truth.grad.frobenius_norm() == doctest::Approx(0.0));

    LossEval purity = loss_and_grad(LossKind::VirtualCooling, HermitianMatrix::identity(d), rho);
    CMatrix sq = mat_mul(rho.matrix().to_cmatrix(), rho.matrix().to_cmatrix());
    CHECK(purity.loss == doctest::Approx(trace(sq).real()).epsilon(1e-12));
    DensityMatrix pure = DensityMatrix::pure(haar_unit_vector(d, rng));
    CHECK(loss_and_grad(LossKind::VirtualCooling, HermitianMatrix::identity(d), pure).loss ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(loss_and_grad(LossKind::VirtualCooling, HermitianMatrix::identity(d),
                        DensityMatrix::maximally_mixed(d))
              .loss == doctest::Approx(1.0 / d).epsilon(1e-12));

    HermitianMatrix indef =
        HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0, 0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(loss_and_grad(LossKind::Renyi2, indef, rho), contract_error);

    auto psd_observable = [&](Rng& r) {
        CMatrix g(d, d);
        for (cplx& v : g.a) v = cplx(r.normal(), r.normal());
        HermitianMatrix o = HermitianMatrix::from_cmatrix(mat_mul(g, adjoint(g)));
        o *= 1.0 / op_norm(o);
        return o;
    };
    for (LossKind kind : {LossKind::L1, LossKind::VirtualCooling, LossKind::Renyi2}) {
        HermitianMatrix O = psd_observable(rng);
        LossEval le = loss_and_grad(kind, O, rho, &truth);
        auto loss_at = [&](const HermitianMatrix& m) {
            switch (kind) {
                case LossKind::L1: {
                    double v = inner(O, m) - inner(O, truth.matrix());
                    return std::fabs(v);
                }
                case LossKind::VirtualCooling:
                    return trace(mat_mul(mat_mul(O.to_cmatrix(), m.to_cmatrix()), m.to_cmatrix()))
                        .real();
                case LossKind::Renyi2: {
                    CMatrix om = mat_mul(O.to_cmatrix(), m.to_cmatrix());
                    return trace(mat_mul(om, om)).real();
                }
            }
            return 0.0;
        };
        for (int dir = 0; dir < 20; ++dir) {
            HermitianMatrix Hd = gaussian_hermitian(d, rng);
            Hd *= 1.0 / op_norm(Hd);
            const double h = 1e-5;
            HermitianMatrix up = rho.matrix() + h * Hd;
            HermitianMatrix dn = rho.matrix() - h * Hd;
            const double fd = (loss_at(up) - loss_at(dn)) / (2.0 * h);
            const double an = inner(le.grad, Hd);
            CHECK(std::fabs(fd - an) <= 1e-5 * std::max({1.0, std::fabs(fd), std::fabs(an)}));
        }
    }

    for (int trial = 0; trial < 10; ++trial) {
        HermitianMatrix O = psd_observable(rng);
        DensityMatrix r1 = random_density(d, rng);
        DensityMatrix r2 = random_density(d, rng);
        HermitianMatrix mid = 0.5 * (r1.matrix() + r2.matrix());
        DensityMatrix rm = DensityMatrix::from_psd_unit_trace(std::move(mid));
        for (LossKind kind : {LossKind::VirtualCooling, LossKind::Renyi2}) {
            const double lm = loss_and_grad(kind, O, rm).loss;
            const double l1v = loss_and_grad(kind, O, r1).loss;
            const double l2v = loss_and_grad(kind, O, r2).loss;
            CHECK(lm <= 0.5 * (l1v + l2v) + 1e-9);
        }
    }

    CHECK_THROWS_AS(loss_and_grad(LossKind::L1, HermitianMatrix::identity(d), rho),
                    contract_error);
}
