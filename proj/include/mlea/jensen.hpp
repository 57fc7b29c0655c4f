// jensen.hpp: Numerical laboratory for the one-sided Jensen's trace
// inequality tr[Phi(S+G)] <= tr[((eps I + G)/2eps) Phi(S + eps I) +
// ((eps I - G)/2eps) Phi(S - eps I)]: gap evaluation for a family of spectral
// functions, randomized suites, the interleaving-product bound, and the
// even-monomial conjecture search.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlea/eig.hpp"
#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"
#include "mlea/potentials.hpp"
#include "mlea/rng.hpp"
#include "mlea/spectral.hpp"

namespace mlea {

// ------------------------------ spectral function ----------------------------

struct SpectralFunction {
    enum class Kind { Abs, Affine, Monomial, Exp, ExpSquare, Erfi };

    Kind kind = Kind::Abs;
    double a = 1.0, b = 0.0;  // affine a x + b
    int degree = 0;           // monomial x^degree
    double c = 1.0;           // exp(c x)
    PotentialSpec pot;        // exp_square / erfi parameters
    long t = 1;

    static SpectralFunction abs() { return {Kind::Abs, 0, 0, 0, 0, {}, 1}; }
    static SpectralFunction affine(double a, double b) {
        return {Kind::Affine, a, b, 0, 0, {}, 1};
    }
    static SpectralFunction monomial(int degree) {
        if (degree < 0) throw contract_error("monomial degree must be >= 0");
        return {Kind::Monomial, 0, 0, degree, 0, {}, 1};
    }
    static SpectralFunction exp(double c) { return {Kind::Exp, 0, 0, 0, c, {}, 1}; }
    static SpectralFunction exp_square(long t, double eps, int dim) {
        return {Kind::ExpSquare, 0, 0, 0, 0, PotentialSpec::exp_square(eps, dim), t};
    }
    static SpectralFunction erfi(long t, double eps, int dim) {
        return {Kind::Erfi, 0, 0, 0, 0, PotentialSpec::erfi(eps, dim), t};
    }

    double operator()(double x) const {
        switch (kind) {
            case Kind::Abs: return std::fabs(x);
            case Kind::Affine: return a * x + b;
            case Kind::Monomial: return std::pow(x, degree);
            case Kind::Exp: return std::exp(c * x);
            case Kind::ExpSquare:
            case Kind::Erfi: return potential_eval(pot, x, t);
        }
        throw contract_error("SpectralFunction: unknown kind");
    }

    std::string name() const {
        switch (kind) {
            case Kind::Abs: return "abs";
            case Kind::Affine: return "affine(" + std::to_string(a) + "," + std::to_string(b) + ")";
            case Kind::Monomial: return "x^" + std::to_string(degree);
            case Kind::Exp: return "exp(" + std::to_string(c) + "x)";
            case Kind::ExpSquare: return "exp_square(t=" + std::to_string(t) + ")";
            case Kind::Erfi: return "erfi(t=" + std::to_string(t) + ")";
        }
        return "?";
    }

    // Default |G|_op budget for the randomized suites.
    double default_eps() const {
        return (kind == Kind::ExpSquare || kind == Kind::Erfi) ? pot.eps : 1.0;
    }
};

// --------------------------------- gap value ---------------------------------

namespace detail {

inline double jensen_gap_from_eigs(const SpectralFunction& phi, const EigenDecomposition& eig_s,
                                   const EigenDecomposition& eig_sum, const HermitianMatrix& G,
                                   double eps) {
    double lhs = 0.0;
    for (double lam : eig_sum.values) lhs += phi(lam);
    const std::vector<double> w = basis_quadratic_forms(eig_s, G);
    double rhs = 0.0;
    for (int i = 0; i < eig_s.dim; ++i) {
        const double lam = eig_s.values[i];
        rhs += (eps + w[i]) * phi(lam + eps) + (eps - w[i]) * phi(lam - eps);
    }
    rhs /= 2.0 * eps;
    return rhs - lhs;
}

}  // namespace detail

// RHS - LHS of the one-sided Jensen inequality; negative values are
// violations. Exact spectral evaluation through the QL eigensolver.
inline double jensen_gap(const SpectralFunction& phi, const HermitianMatrix& S,
                         const HermitianMatrix& G, double eps) {
    S.check_same_dim(G);
    if (eps <= 0.0) throw contract_error("jensen_gap: eps must be > 0");
    const double gn = op_norm(G);
    if (gn > eps + 1e-9)
        throw contract_error("jensen_gap: |G|_op = " + std::to_string(gn) + " exceeds eps = " +
                             std::to_string(eps));
    return detail::jensen_gap_from_eigs(phi, eig_hermitian(S), eig_hermitian(S + G), G, eps);
}

// Same gap recomputed with the cyclic Jacobi solver at tightened tolerance;
// used to re-verify candidate violations before they are reported.
inline double jensen_gap_jacobi(const SpectralFunction& phi, const HermitianMatrix& S,
                                const HermitianMatrix& G, double eps, double tol = 1e-15) {
    return detail::jensen_gap_from_eigs(phi, eig_hermitian_jacobi(S, tol),
                                        eig_hermitian_jacobi(S + G, tol), G, eps);
}

// scale = max(1, |LHS|, |RHS|); both the suite threshold and the reported
// minimum gap are relative to it.
inline double jensen_scale(const SpectralFunction& phi, const HermitianMatrix& S,
                           const HermitianMatrix& G, double eps) {
    const EigenDecomposition eig_sum = eig_hermitian(S + G);
    double lhs = 0.0;
    for (double lam : eig_sum.values) lhs += phi(lam);
    const double gap = jensen_gap(phi, S, G, eps);
    const double rhs = gap + lhs;
    return std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

// ------------------------------- random suites -------------------------------

struct JensenInstance {
    HermitianMatrix S;
    HermitianMatrix G;
    double eps = 1.0;
    double gap = 0.0;             // raw
    double normalized_gap = 0.0;  // gap / scale
};

struct JensenSuiteResult {
    std::string phi_name;
    int trials = 0;
    double min_normalized_gap = 0.0;
    JensenInstance argmin;
    // candidates below -1e-7 * scale that survived the tightened Jacobi
    // re-verification
    int confirmed_violations = 0;
};

// Samples Hermitian S (standard complex Gaussian entries) and G (Gaussian
// rescaled to |G|_op = u * eps, u ~ U(0,1]), and reports the minimum
// (normalized) gap with the minimizing pair.
inline JensenSuiteResult random_jensen_suite(const SpectralFunction& phi, int d, int trials,
                                             std::uint64_t seed) {
    if (d < 1 || d > 16) throw contract_error("random_jensen_suite: d must be in [1, 16]");
    if (trials < 1) throw contract_error("random_jensen_suite: trials must be >= 1");
    Rng rng(seed);
    const double eps = phi.default_eps();

    JensenSuiteResult res;
    res.phi_name = phi.name();
    res.trials = trials;
    res.min_normalized_gap = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        HermitianMatrix S = gaussian_hermitian(d, rng);
        HermitianMatrix G = gaussian_hermitian(d, rng);
        const double gn = op_norm(G);
        const double u = 1.0 - rng.uniform();  // (0, 1]
        if (gn > 0.0) G *= u * eps / gn;

        const EigenDecomposition eig_s = eig_hermitian(S);
        const EigenDecomposition eig_sum = eig_hermitian(S + G);
        double lhs = 0.0;
        for (double lam : eig_sum.values) lhs += phi(lam);
        const double gap = detail::jensen_gap_from_eigs(phi, eig_s, eig_sum, G, eps);
        const double scale = std::max({1.0, std::fabs(lhs), std::fabs(gap + lhs)});
        double ngap = gap / scale;

        if (ngap < -1e-7) {
            // re-verify candidate violations at tightened Jacobi tolerance
            const double jgap = jensen_gap_jacobi(phi, S, G, eps);
            if (jgap / scale < -1e-7)
                res.confirmed_violations += 1;
            else
                ngap = jgap / scale;
        }
        if (ngap < res.min_normalized_gap) {
            res.min_normalized_gap = ngap;
            res.argmin = {S, G, eps, gap, ngap};
        }
    }
    return res;
}

// --------------------------- interleaving products ---------------------------

enum class FactorTag { S, G };

// tr[S^(2k - 2l)] - |tr[X_0 ... X_{2k-1}]| for a word over {S, G} of even
// length 2k containing an even number 2l of G factors, given |G|_op <= 1.
inline double interleaving_bound_gap(const std::vector<FactorTag>& sequence,
                                     const HermitianMatrix& S, const HermitianMatrix& G) {
    S.check_same_dim(G);
    const size_t len = sequence.size();
    if (len == 0 || len % 2 != 0)
        throw contract_error("interleaving_bound_gap: sequence length must be even and > 0");
    size_t g_count = 0;
    for (FactorTag tag : sequence)
        if (tag == FactorTag::G) ++g_count;
    if (g_count % 2 != 0)
        throw contract_error("interleaving_bound_gap: G count must be even");
    const double gn = op_norm(G);
    if (gn > 1.0 + 1e-9)
        throw contract_error("interleaving_bound_gap: |G|_op must be <= 1");

    const CMatrix Sc = S.to_cmatrix();
    const CMatrix Gc = G.to_cmatrix();
    CMatrix prod = (sequence[0] == FactorTag::S) ? Sc : Gc;
    for (size_t i = 1; i < len; ++i) prod = mat_mul(prod, sequence[i] == FactorTag::S ? Sc : Gc);
    const double tr_prod = std::abs(trace(prod));

    const long s_power = static_cast<long>(len - g_count);
    double tr_pow = 0.0;
    for (double lam : eigvals_hermitian(S)) tr_pow += std::pow(lam, static_cast<double>(s_power));
    return tr_pow - tr_prod;
}

// ----------------------------- conjecture search -----------------------------

struct MonomialSearchRow {
    int k = 0;
    int trials = 0;
    double min_normalized_gap = 0.0;
    int flagged = 0;  // confirmed candidates below -1e-7 * scale
    JensenInstance argmin;
};

struct MonomialSearchReport {
    std::vector<MonomialSearchRow> rows;
    int total_flagged() const {
        int n = 0;
        for (const auto& r : rows) n += r.flagged;
        return n;
    }
};

// Randomized search for counterexamples to the even-monomial conjecture
// Phi(x) = x^{2k}. Inputs are rescaled so |S|_op <= 4 and |G|_op = u in (0,1]
// (eps = 1); a normalized gap below -1e-7 that survives the Jacobi
// re-verification is flagged.
inline MonomialSearchReport monomial_conjecture_search(int k_max, int trials_per_k, int d,
                                                       std::uint64_t seed) {
    if (k_max < 1 || k_max > 8) throw contract_error("monomial_conjecture_search: k_max in [1,8]");
    if (d < 1 || d > 16) throw contract_error("monomial_conjecture_search: d in [1,16]");
    MonomialSearchReport report;
    for (int k = 1; k <= k_max; ++k) {
        Rng rng(Rng(seed).split(static_cast<std::uint64_t>(k)).next_u64());
        SpectralFunction phi = SpectralFunction::monomial(2 * k);
        MonomialSearchRow row;
        row.k = k;
        row.trials = trials_per_k;
        row.min_normalized_gap = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < trials_per_k; ++trial) {
            HermitianMatrix S = gaussian_hermitian(d, rng);
            const double sn = op_norm(S);
            if (sn > 4.0) S *= 4.0 / sn;
            HermitianMatrix G = gaussian_hermitian(d, rng);
            const double gn = op_norm(G);
            const double u = 1.0 - rng.uniform();
            if (gn > 0.0) G *= u / gn;

            const EigenDecomposition eig_s = eig_hermitian(S);
            const EigenDecomposition eig_sum = eig_hermitian(S + G);
            double lhs = 0.0;
            for (double lam : eig_sum.values) lhs += phi(lam);
            const double gap = detail::jensen_gap_from_eigs(phi, eig_s, eig_sum, G, 1.0);
            const double scale = std::max({1.0, std::fabs(lhs), std::fabs(gap + lhs)});
            double ngap = gap / scale;
            if (ngap < -1e-7) {
                const double jgap = jensen_gap_jacobi(phi, S, G, 1.0);
                if (jgap / scale < -1e-7)
                    row.flagged += 1;
                else
                    ngap = jgap / scale;
            }
            if (ngap < row.min_normalized_gap) {
                row.min_normalized_gap = ngap;
                row.argmin = {S, G, 1.0, gap, ngap};
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace mlea
