// matrix.hpp: Dense complex matrices and the Hermitian carrier type used by
// every other module. Storage is row-major std::vector<std::complex<double>>;
// dimensions stay small (d <= ~512) so no sparse or blocked formats.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlea/errors.hpp"
#include "mlea/rng.hpp"

namespace mlea {

using cplx = std::complex<double>;

// ------------------------------ plain matrix -------------------------------

// General complex matrix for intermediates (products, unitaries, workspaces).
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;  // row-major

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline CMatrix adjoint(const CMatrix& m) {
    CMatrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

// C = A * B, ikj loop order for contiguous inner accesses.
inline CMatrix mat_mul(const CMatrix& A, const CMatrix& B) {
    if (A.cols != B.rows) throw dimension_error("mat_mul: inner dimensions differ");
    CMatrix C(A.rows, B.cols);
    const int n = A.rows, k_dim = A.cols, m = B.cols;
    for (int i = 0; i < n; ++i) {
        cplx* ci = &C.a[static_cast<size_t>(i) * m];
        for (int k = 0; k < k_dim; ++k) {
            const cplx aik = A(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* bk = &B.a[static_cast<size_t>(k) * m];
            for (int j = 0; j < m; ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

inline cplx trace(const CMatrix& m) {
    cplx t = 0.0;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) t += m(i, i);
    return t;
}

// ----------------------------- Hermitian matrix -----------------------------

/// Dense d x d complex matrix with A = A^dagger. Construction from raw entries
/// rejects deviations above 1e-12 and then symmetrizes exactly as (A + A^t)/2,
/// so stored data is Hermitian to the last bit.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;

    static HermitianMatrix zero(int d) {
        check_dim(d);
        HermitianMatrix h;
        h.dim_ = d;
        h.a_.assign(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
        return h;
    }

    static HermitianMatrix identity(int d) {
        HermitianMatrix h = zero(d);
        for (int i = 0; i < d; ++i) h.at(i, i) = 1.0;
        return h;
    }

    static HermitianMatrix diagonal(std::span<const double> diag) {
        HermitianMatrix h = zero(static_cast<int>(diag.size()));
        for (int i = 0; i < h.dim_; ++i) h.at(i, i) = diag[i];
        return h;
    }

    // Checked entry point for external data (deserialization, user input).
    static HermitianMatrix from_entries(int d, std::span<const cplx> entries, double tol = 1e-12) {
        check_dim(d);
        if (entries.size() != static_cast<size_t>(d) * d)
            throw dimension_error("from_entries: expected " + std::to_string(d) + "x" +
                                  std::to_string(d) + " entries");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                const cplx diff = entries[static_cast<size_t>(i) * d + j] -
                                  std::conj(entries[static_cast<size_t>(j) * d + i]);
                if (std::abs(diff) > tol)
                    throw contract_error("from_entries: not Hermitian at (" + std::to_string(i) +
                                         "," + std::to_string(j) + "), deviation " +
                                         std::to_string(std::abs(diff)));
            }
        return symmetrized(d, std::vector<cplx>(entries.begin(), entries.end()));
    }

    // Internal factory for computed results that are Hermitian up to rounding.
    static HermitianMatrix symmetrized(int d, std::vector<cplx> entries) {
        check_dim(d);
        HermitianMatrix h;
        h.dim_ = d;
        h.a_ = std::move(entries);
        for (int i = 0; i < d; ++i) {
            h.at(i, i) = cplx(h.at(i, i).real(), 0.0);
            for (int j = 0; j < i; ++j) {
                const cplx v = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));
                h.at(i, j) = v;
                h.at(j, i) = std::conj(v);
            }
        }
        return h;
    }

    static HermitianMatrix from_cmatrix(const CMatrix& m) {
        if (m.rows != m.cols) throw dimension_error("from_cmatrix: not square");
        return symmetrized(m.rows, m.a);
    }

    int dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    const cplx& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    cplx& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }

    const std::vector<cplx>& data() const { return a_; }

    CMatrix to_cmatrix() const {
        CMatrix m(dim_, dim_);
        m.a = a_;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += at(i, i).real();
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs_entry() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    HermitianMatrix& operator+=(const HermitianMatrix& o) {
        check_same_dim(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    HermitianMatrix& operator-=(const HermitianMatrix& o) {
        check_same_dim(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    HermitianMatrix& operator*=(double c) {
        for (cplx& v : a_) v *= c;
        return *this;
    }

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(double c, HermitianMatrix a) { return a *= c; }
    friend HermitianMatrix operator*(HermitianMatrix a, double c) { return a *= c; }
    friend HermitianMatrix operator-(HermitianMatrix a) { return a *= -1.0; }

    void check_same_dim(const HermitianMatrix& o) const {
        if (dim_ != o.dim_) throw dimension_error("dimension mismatch");
    }

  private:
    static void check_dim(int d) {
        if (d < 1) throw dimension_error("dimension must be >= 1");
    }

    int dim_ = 0;
    std::vector<cplx> a_;
};

// Frobenius inner product Re tr(AB) for Hermitian A, B. tr(AB) is real in
// exact arithmetic; the residual imaginary mass is asserted below 1e-10
// (relative to the norm product for large inputs).
inline double inner(const HermitianMatrix& A, const HermitianMatrix& B) {
    A.check_same_dim(B);
    const int d = A.dim();
    double re = 0.0, im = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            // tr(AB) = sum_ij A_ij * conj(B_ij) since B is Hermitian.
            const cplx p = A.at(i, j) * std::conj(B.at(i, j));
            re += p.real();
            im += p.imag();
        }
    const double scale = std::max(1.0, A.frobenius_norm() * B.frobenius_norm());
    if (std::abs(im) > 1e-10 * scale)
        throw invariant_error("inner: imaginary part " + std::to_string(im));
    return re;
}

// Quadratic form v^dagger A v (real for Hermitian A).
inline double quadratic_form(const HermitianMatrix& A, std::span<const cplx> v) {
    const int d = A.dim();
    if (v.size() != static_cast<size_t>(d)) throw dimension_error("quadratic_form: size");
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < d; ++j) row += A.at(i, j) * v[j];
        acc += (std::conj(v[i]) * row).real();
    }
    return acc;
}

// Haar-distributed unit vector in C^d (normalized complex Gaussian).
inline std::vector<cplx> haar_unit_vector(int d, Rng& rng) {
    std::vector<cplx> v(d);
    double nrm2 = 0.0;
    for (int i = 0; i < d; ++i) {
        v[i] = cplx(rng.normal(), rng.normal());
        nrm2 += std::norm(v[i]);
    }
    const double inv = 1.0 / std::sqrt(nrm2);
    for (cplx& x : v) x *= inv;
    return v;
}

// Hermitian matrix with independent standard complex Gaussian entries:
// N(0,1) on the diagonal, (g + i g')/sqrt(2) above it.
inline HermitianMatrix gaussian_hermitian(int d, Rng& rng) {
    HermitianMatrix h = HermitianMatrix::zero(d);
    const double inv_sqrt2 = 0.70710678118654752440;
    for (int i = 0; i < d; ++i) {
        h.at(i, i) = rng.normal();
        for (int j = 0; j < i; ++j) {
            const cplx v = cplx(rng.normal(), rng.normal()) * inv_sqrt2;
            h.at(i, j) = v;
            h.at(j, i) = std::conj(v);
        }
    }
    return h;
}

}  // namespace mlea
