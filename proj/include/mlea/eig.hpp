// eig.hpp: Self-contained Hermitian eigensolvers.
//
// eig_hermitian: unitary Householder reduction to real symmetric tridiagonal
// followed by implicit-shift QL. O(d^3) with small constants; this is the
// solver every per-round spectral operation runs on.
//
// eig_hermitian_jacobi: cyclic complex Jacobi rotations. Slower but simple to
// reason about; used to re-verify candidate inequality violations at tightened
// tolerance and as an independent cross-check of the QL path.
//
// Both are deterministic for identical input bits: fixed sweep orders, no
// pivot randomization, stable sorting of the spectrum.

#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mlea/errors.hpp"
#include "mlea/matrix.hpp"

namespace mlea {

/// Spectrum of a Hermitian matrix: ascending eigenvalues plus a unitary whose
/// k-th column (stored contiguously at [k*dim, (k+1)*dim)) is the k-th
/// eigenvector.
struct EigenDecomposition {
    int dim = 0;
    std::vector<double> values;
    std::vector<cplx> vectors;

    std::span<const cplx> vec(int k) const {
        return std::span<const cplx>(vectors).subspan(static_cast<size_t>(k) * dim, dim);
    }
};

namespace detail {

// Householder reduction of Hermitian W (row-major, modified in place) to a
// real symmetric tridiagonal (diag, sub). When vt is non-null the unitary is
// accumulated into it, stored transposed (row k of vt = eigenvector column k).
inline void householder_tridiag(int n, std::vector<cplx>& W, std::vector<double>& diag,
                                std::vector<double>& sub, std::vector<cplx>* vt) {
    auto w = [&](int i, int j) -> cplx& { return W[static_cast<size_t>(i) * n + j]; };
    diag.assign(n, 0.0);
    sub.assign(n, 0.0);

    std::vector<cplx> beta(n, cplx(0.0, 0.0));  // complex subdiagonals
    std::vector<std::vector<cplx>> hh(n);       // Householder vectors per step
    std::vector<double> tau(n, 0.0);            // 2/|u|^2 per step

    std::vector<cplx> u, p, q;
    for (int k = 0; k + 2 < n; ++k) {
        const int m = n - k - 1;  // size of trailing block
        double sigma2 = 0.0;
        for (int i = k + 1; i < n; ++i) sigma2 += std::norm(w(i, k));
        const double sigma = std::sqrt(sigma2);
        if (sigma == 0.0) {
            beta[k] = 0.0;
            continue;
        }
        const cplx alpha = w(k + 1, k);
        const double aabs = std::abs(alpha);
        const cplx phase = (aabs > 0.0) ? alpha / aabs : cplx(1.0, 0.0);

        u.assign(m, cplx(0.0, 0.0));
        for (int i = 0; i < m; ++i) u[i] = w(k + 1 + i, k);
        u[0] += phase * sigma;
        const double unorm2 = 2.0 * sigma * (sigma + aabs);
        const double t = 2.0 / unorm2;

        // p = t * B u over the trailing block B = W[k+1.., k+1..]
        p.assign(m, cplx(0.0, 0.0));
        for (int i = 0; i < m; ++i) {
            cplx acc = 0.0;
            const cplx* row = &W[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j) acc += row[j] * u[j];
            p[i] = t * acc;
        }
        cplx upc = 0.0;
        for (int i = 0; i < m; ++i) upc += std::conj(u[i]) * p[i];
        const double kscale = 0.5 * t * upc.real();
        q.assign(m, cplx(0.0, 0.0));
        for (int i = 0; i < m; ++i) q[i] = p[i] - kscale * u[i];

        // B <- B - q u^dag - u q^dag
        for (int i = 0; i < m; ++i) {
            cplx* row = &W[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            const cplx qi = q[i], ui = u[i];
            for (int j = 0; j < m; ++j) row[j] -= qi * std::conj(u[j]) + ui * std::conj(q[j]);
        }

        beta[k] = -phase * sigma;
        hh[k] = u;
        tau[k] = t;
        w(k + 1, k) = beta[k];
        for (int i = k + 2; i < n; ++i) w(i, k) = 0.0;
    }
    if (n >= 2) beta[n - 2] = w(n - 1, n - 2);

    // Accumulate Q = H_0 H_1 ... into vt (transposed storage), then fold in
    // the diagonal phases that make the subdiagonal real non-negative.
    if (vt) {
        auto& V = *vt;
        V.assign(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
        for (int i = 0; i < n; ++i) V[static_cast<size_t>(i) * n + i] = 1.0;
        std::vector<cplx> y(n);
        for (int k = n - 3; k >= 0; --k) {
            if (hh[k].empty()) continue;
            const int m = n - k - 1;
            const std::vector<cplx>& uk = hh[k];
            // vt <- vt * H^T: y = vt * conj(u); vt -= tau * y u^T (columns k+1..)
            for (int r = 0; r < n; ++r) {
                cplx acc = 0.0;
                cplx* row = &V[static_cast<size_t>(r) * n + (k + 1)];
                for (int c = 0; c < m; ++c) acc += row[c] * std::conj(uk[c]);
                y[r] = tau[k] * acc;
            }
            for (int r = 0; r < n; ++r) {
                cplx* row = &V[static_cast<size_t>(r) * n + (k + 1)];
                const cplx yr = y[r];
                for (int c = 0; c < m; ++c) row[c] -= yr * uk[c];
            }
        }
        cplx delta = 1.0;
        std::vector<cplx> phases(n, cplx(1.0, 0.0));
        for (int j = 0; j + 1 < n; ++j) {
            const double babs = std::abs(beta[j]);
            if (babs > 0.0) delta *= beta[j] / babs;
            phases[j + 1] = delta;
        }
        // vt holds Q^T; fold phases: row j of (Q D)^T = delta_j * row j of Q^T.
        for (int j = 0; j < n; ++j) {
            const cplx ph = phases[j];
            cplx* row = &V[static_cast<size_t>(j) * n];
            for (int c = 0; c < n; ++c) row[c] *= ph;
        }
    }

    for (int i = 0; i < n; ++i) diag[i] = w(i, i).real();
    for (int j = 0; j + 1 < n; ++j) sub[j] = std::abs(beta[j]);
}

// Implicit-shift QL on a real symmetric tridiagonal. sub[i] couples diag[i]
// and diag[i+1]. Rotations are applied to rows of vt when present.
inline void tql_implicit(int n, std::vector<double>& diag, std::vector<double>& sub,
                         std::vector<cplx>* vt) {
    if (n == 1) return;
    std::vector<double> e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = sub[i];

    auto rotate_rows = [&](int i, double c, double s) {
        if (!vt) return;
        cplx* ri = &(*vt)[static_cast<size_t>(i) * n];
        cplx* rj = &(*vt)[static_cast<size_t>(i + 1) * n];
        for (int k = 0; k < n; ++k) {
            const cplx f = rj[k];
            rj[k] = s * ri[k] + c * f;
            ri[k] = c * ri[k] - s * f;
        }
    };

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw convergence_error("tql: no convergence after 50 iterations at index " +
                                            std::to_string(l));
                double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                bool underflow = false;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    rotate_rows(i, c, s);
                }
                if (underflow && i >= l) continue;
                diag[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

inline void sort_spectrum(int n, std::vector<double>& values, std::vector<cplx>* vt) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<double> v2(n);
    for (int i = 0; i < n; ++i) v2[i] = values[idx[i]];
    values = std::move(v2);
    if (vt) {
        std::vector<cplx> out(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            std::copy_n(vt->begin() + static_cast<size_t>(idx[i]) * n, n,
                        out.begin() + static_cast<size_t>(i) * n);
        *vt = std::move(out);
    }
}

}  // namespace detail

inline EigenDecomposition eig_hermitian(const HermitianMatrix& A) {
    const int n = A.dim();
    std::vector<cplx> W = A.data();
    std::vector<double> diag, sub;
    std::vector<cplx> vt;
    detail::householder_tridiag(n, W, diag, sub, &vt);
    detail::tql_implicit(n, diag, sub, &vt);
    detail::sort_spectrum(n, diag, &vt);
    EigenDecomposition e;
    e.dim = n;
    e.values = std::move(diag);
    e.vectors = std::move(vt);
    return e;
}

// Eigenvalues only; roughly 3x cheaper than the full decomposition.
inline std::vector<double> eigvals_hermitian(const HermitianMatrix& A) {
    const int n = A.dim();
    std::vector<cplx> W = A.data();
    std::vector<double> diag, sub;
    detail::householder_tridiag(n, W, diag, sub, nullptr);
    detail::tql_implicit(n, diag, sub, nullptr);
    std::sort(diag.begin(), diag.end());
    return diag;
}

/// Cyclic complex Jacobi eigensolver. Sweeps row pairs (p, q) in fixed order,
/// stopping when the off-diagonal Frobenius mass falls below rel_tol * |A|_F.
/// Rotation budget 64 d^2; exhausting it raises a diagnostic carrying the
/// remaining off-diagonal residual.
inline EigenDecomposition eig_hermitian_jacobi(const HermitianMatrix& A, double rel_tol = 1e-13) {
    const int n = A.dim();
    std::vector<cplx> W = A.data();
    auto w = [&](int i, int j) -> cplx& { return W[static_cast<size_t>(i) * n + j]; };
    std::vector<cplx> vt(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) vt[static_cast<size_t>(i) * n + i] = 1.0;

    const double fro = A.frobenius_norm();
    const double stop = rel_tol * fro;
    const long max_rotations = 64L * n * n;
    long rotations = 0;

    auto off_mass = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(w(i, j));
        return std::sqrt(s);
    };

    if (n > 1) {
        double off = off_mass();
        while (off > stop) {
            const double skip = off / (n * std::max(n - 1, 1));
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const double babs = std::abs(w(p, q));
                    if (babs <= 0.1 * skip || babs == 0.0) continue;
                    if (++rotations > max_rotations)
                        throw convergence_error(
                            "jacobi: rotation budget 64*d^2 exhausted, off-diagonal residual " +
                            std::to_string(off_mass()));
                    const cplx b = w(p, q);
                    const cplx phase = b / babs;
                    const double beta = (w(q, q).real() - w(p, p).real()) / (2.0 * babs);
                    const double t =
                        (beta >= 0.0 ? 1.0 : -1.0) / (std::fabs(beta) + std::sqrt(beta * beta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    const cplx sp = s * phase;
                    const cplx spc = s * std::conj(phase);

                    w(p, p) = w(p, p).real() - t * babs;
                    w(q, q) = w(q, q).real() + t * babs;
                    w(p, q) = 0.0;
                    w(q, p) = 0.0;
                    for (int k = 0; k < n; ++k) {
                        if (k == p || k == q) continue;
                        const cplx wkp = w(k, p), wkq = w(k, q);
                        w(k, p) = c * wkp - spc * wkq;
                        w(k, q) = sp * wkp + c * wkq;
                        w(p, k) = std::conj(w(k, p));
                        w(q, k) = std::conj(w(k, q));
                    }
                    cplx* rp = &vt[static_cast<size_t>(p) * n];
                    cplx* rq = &vt[static_cast<size_t>(q) * n];
                    for (int k = 0; k < n; ++k) {
                        const cplx vp = rp[k], vq = rq[k];
                        rp[k] = c * vp - spc * vq;
                        rq[k] = sp * vp + c * vq;
                    }
                }
            }
            off = off_mass();
        }
    }

    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = w(i, i).real();
    detail::sort_spectrum(n, values, &vt);
    EigenDecomposition e;
    e.dim = n;
    e.values = std::move(values);
    e.vectors = std::move(vt);
    return e;
}

// Sum of g(lambda_k) v_k v_k^dag in the given eigenbasis.
inline HermitianMatrix spectral_assemble(const EigenDecomposition& eig,
                                         std::span<const double> g) {
    const int n = eig.dim;
    if (g.size() != static_cast<size_t>(n)) throw dimension_error("spectral_assemble: size");
    std::vector<cplx> out(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        const double gk = g[k];
        if (gk == 0.0) continue;
        const cplx* v = &eig.vectors[static_cast<size_t>(k) * n];
        for (int i = 0; i < n; ++i) {
            const cplx lhs = gk * v[i];
            cplx* row = &out[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) row[j] += lhs * std::conj(v[j]);
        }
    }
    return HermitianMatrix::symmetrized(n, std::move(out));
}

// Diagonal of V^dag G V: w_k = v_k^dag G v_k for every eigenvector.
inline std::vector<double> basis_quadratic_forms(const EigenDecomposition& eig,
                                                 const HermitianMatrix& G) {
    const int n = eig.dim;
    if (G.dim() != n) throw dimension_error("basis_quadratic_forms: dims");
    std::vector<double> w(n, 0.0);
    std::vector<cplx> y(n);
    for (int k = 0; k < n; ++k) {
        const cplx* v = &eig.vectors[static_cast<size_t>(k) * n];
        for (int i = 0; i < n; ++i) {
            cplx acc = 0.0;
            const cplx* row = &G.data()[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) acc += row[j] * v[j];
            y[i] = acc;
        }
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += (std::conj(v[i]) * y[i]).real();
        w[k] = acc;
    }
    return w;
}

}  // namespace mlea
